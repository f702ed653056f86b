/**
 * Browser-level tests: the app mounted in a DOM (jsdom), driven through
 * clicks and input events, talking to the real Python service over HTTP.
 * Covers the two UI acceptance criteria: the two-feature logreg train
 * contract and the manual-tree editor equivalence.
 */

import { JSDOM } from "jsdom";
import { afterAll, beforeAll, beforeEach, describe, expect, it } from "vitest";

import { ServiceClient } from "../src/api.js";
import type { FetchLike, ModelMetricsResponse } from "../src/api.js";
import { App, createApp } from "../src/app.js";
import { SAMPLE_CORPUS_CSV } from "../src/catalog.js";
import { startService } from "./service_helper.js";
import type { RunningService } from "./service_helper.js";

interface RecordedCall {
  method: string;
  url: string;
  body: unknown;
}

let service: RunningService;

beforeAll(async () => {
  service = await startService();
}, 60_000);

afterAll(async () => {
  await service?.stop();
});

function recordingFetch(calls: RecordedCall[]): FetchLike {
  return (input, init) => {
    calls.push({
      method: init?.method ?? "GET",
      url: input,
      body: typeof init?.body === "string" ? JSON.parse(init.body) : undefined,
    });
    return fetch(input, init);
  };
}

interface Harness {
  app: App;
  dom: JSDOM;
  calls: RecordedCall[];
  root: HTMLElement;
}

function mountApp(baseUrl: string = service.baseUrl): Harness {
  const dom = new JSDOM('<!doctype html><html><body><div id="app"></div></body></html>');
  const root = dom.window.document.getElementById("app") as HTMLElement;
  const calls: RecordedCall[] = [];
  const client = new ServiceClient(baseUrl, recordingFetch(calls));
  const app = createApp(root, client, { debounceMs: 60 });
  return { app, dom, calls, root };
}

function click(harness: Harness, selector: string): void {
  const node = harness.root.querySelector<HTMLElement>(selector);
  if (!node) throw new Error(`nothing matches ${selector}`);
  node.click();
}

function setSelect(harness: Harness, selector: string, value: string): void {
  const node = harness.root.querySelector<HTMLSelectElement>(selector);
  if (!node) throw new Error(`nothing matches ${selector}`);
  node.value = value;
  node.dispatchEvent(new harness.dom.window.Event("change", { bubbles: true }));
}

async function loadSample(harness: Harness): Promise<void> {
  click(harness, "#load-sample");
  await harness.app.idle();
}

function metricText(harness: Harness, side: string, metric: string): string {
  const node = harness.root.querySelector(
    `.metrics-panel[data-side="${side}"] [data-metric="${metric}"]`,
  );
  if (!node) throw new Error(`no ${side}/${metric} cell rendered`);
  return node.textContent ?? "";
}

const fmt = (v: number | null) => (v === null ? "n/a" : v.toFixed(3));

describe("train guard", () => {
  it("Train stays disabled until a corpus is loaded and a feature picked", async () => {
    const harness = mountApp();
    const button = harness.root.querySelector<HTMLButtonElement>("#train-button")!;
    expect(button.disabled).toBe(true);
    await loadSample(harness);
    expect(button.disabled).toBe(true); // logreg with zero features
    click(harness, 'input[data-feature="all_caps"]');
    expect(harness.root.querySelector<HTMLButtonElement>("#train-button")!.disabled).toBe(false);
    click(harness, 'input[data-feature="all_caps"]'); // deselect again
    expect(harness.root.querySelector<HTMLButtonElement>("#train-button")!.disabled).toBe(true);
  });
});

describe("acceptance 13: two-feature logreg contract", () => {
  it("POST /models names exactly the selected features and the Accuracy tab mirrors GET metrics", async () => {
    const harness = mountApp();
    await loadSample(harness);
    click(harness, 'input[data-feature="all_caps"]');
    click(harness, 'input[data-feature="dollar"]');
    setSelect(harness, "#model-kind", "logreg");
    click(harness, "#train-button");
    await harness.app.idle();

    const trainCalls = harness.calls.filter(
      (c) => c.method === "POST" && c.url.endsWith("/models"),
    );
    expect(trainCalls).toHaveLength(1);
    const body = trainCalls[0]!.body as Record<string, unknown>;
    expect(body.kind).toBe("logreg");
    expect(body.feature_names).toEqual(["all_caps", "dollar"]);

    const featureSetCalls = harness.calls.filter(
      (c) => c.method === "POST" && c.url.endsWith("/feature-sets"),
    );
    expect(featureSetCalls).toHaveLength(1);
    const registered = (featureSetCalls[0]!.body as { name: string }[]).map((d) => d.name);
    expect(registered).toEqual(["all_caps", "dollar"]);

    const modelId = harness.app.state.lastTrainedModelId;
    expect(modelId).not.toBeNull();
    const independent = new ServiceClient(service.baseUrl);
    const metrics: ModelMetricsResponse = await independent.modelMetrics(modelId!);

    click(harness, 'button[data-tab="accuracy"]');
    for (const side of ["train", "test"] as const) {
      const block = metrics[side];
      expect(metricText(harness, side, "accuracy")).toBe(fmt(block.accuracy));
      expect(metricText(harness, side, "mcr")).toBe(fmt(block.mcr));
      expect(metricText(harness, side, "sensitivity")).toBe(fmt(block.sensitivity));
      expect(metricText(harness, side, "specificity")).toBe(fmt(block.specificity));
      for (const cell of ["tp", "fn", "fp", "tn"] as const) {
        const rendered = harness.root.querySelector(
          `.metrics-panel[data-side="${side}"] [data-cell="${cell}"]`,
        )?.textContent;
        expect(rendered).toBe(String(block.confusion[cell]));
      }
    }
  }, 60_000);

  it("history strip records each run from fetched metrics", async () => {
    const harness = mountApp();
    await loadSample(harness);
    click(harness, 'input[data-feature="all_caps"]');
    click(harness, "#train-button");
    await harness.app.idle();
    click(harness, 'input[data-feature="dollar"]');
    click(harness, "#train-button");
    await harness.app.idle();
    const entries = [...harness.root.querySelectorAll("#history-strip li")];
    expect(entries).toHaveLength(2);
    expect(entries[0]!.textContent).toContain("1 features");
    expect(entries[1]!.textContent).toContain("2 features");
  }, 60_000);
});

describe("acceptance 14: manual tree editor equivalence", () => {
  it("recreating the dear/bless tree in the editor matches a direct manual_tree POST", async () => {
    const harness = mountApp();
    await loadSample(harness);
    setSelect(harness, "#model-kind", "manual_tree");

    // Split the root on dear_or_bless, mark its true leaf spam,
    // split the false leaf on contains_re, mark its false leaf spam.
    setSelect(harness, '[data-path="root"] select.split-feature', "dear_or_bless");
    click(harness, '[data-path="root"] button.add-split');
    await harness.app.idle();
    setSelect(harness, '[data-path="true"] select.leaf-verdict', "spam");
    await harness.app.idle();
    setSelect(harness, '[data-path="false"] select.split-feature', "contains_re");
    click(harness, '[data-path="false"] button.add-split');
    await harness.app.idle();
    setSelect(harness, '[data-path="false/false"] select.leaf-verdict', "spam");
    await harness.app.idle();

    // Live preview rendered from the API response.
    expect(harness.root.querySelector("#tree-preview")?.textContent).toContain("train MCR 0.400");

    click(harness, "#train-button");
    await harness.app.idle();
    const editorRun = harness.app.lastModelResponse!;

    const direct = new ServiceClient(service.baseUrl);
    const corpus = await direct.uploadCorpus(SAMPLE_CORPUS_CSV);
    const featureSet = await direct.createFeatureSet(
      (await import("../src/catalog.js")).FEATURE_CATALOG,
    );
    const posted = await direct.trainModel({
      kind: "manual_tree",
      feature_set: featureSet.id,
      train_corpus: corpus.id,
      test_corpus: corpus.id,
      seed: 0,
      feature_names: featureSet.feature_names,
      tree: {
        split: "dear_or_bless",
        true: { leaf: "spam" },
        false: { split: "contains_re", true: { leaf: "non-spam" }, false: { leaf: "spam" } },
      },
    });

    expect(editorRun.train_metrics).toEqual(posted.train_metrics);
    expect(editorRun.test_metrics).toEqual(posted.test_metrics);
    expect(editorRun.payload).toEqual(posted.payload);
  }, 60_000);

  it("malformed edits are rejected locally without network traffic", async () => {
    const harness = mountApp();
    await loadSample(harness);
    setSelect(harness, "#model-kind", "manual_tree");
    const before = harness.calls.length;
    // Root is a single leaf: removing it must fail locally.
    await harness.app.editTree({ action: "remove_node", path: [] });
    expect(harness.root.querySelector("#tree-editor-error")?.textContent).toContain("split");
    expect(harness.calls.length).toBe(before);
  });
});

describe("rule editor", () => {
  it("underlines syntax errors at the reported position after the debounce", async () => {
    const harness = mountApp();
    await loadSample(harness);
    setSelect(harness, "#model-kind", "ruleset");
    const buffer = harness.root.querySelector<HTMLTextAreaElement>("#rule-buffer")!;
    buffer.value = "dear_or_bless OR => spam\ndefault => non-spam\n";
    buffer.dispatchEvent(new harness.dom.window.Event("input", { bubbles: true }));
    await new Promise((resolve) => setTimeout(resolve, 200));
    await harness.app.idle();
    const issue = harness.root.querySelector<HTMLElement>(".rule-issue");
    expect(issue).not.toBeNull();
    expect(issue!.dataset.line).toBe("1");
    // "dear_or_bless OR" is the parsed condition; EOF is offset 16, the gap
    // after OR where the missing operand belongs.
    expect(issue!.dataset.position).toBe("16");
    expect(issue!.textContent).toContain("^");
  });

  it("a valid ruleset trains as kind=ruleset", async () => {
    const harness = mountApp();
    await loadSample(harness);
    setSelect(harness, "#model-kind", "ruleset");
    const buffer = harness.root.querySelector<HTMLTextAreaElement>("#rule-buffer")!;
    buffer.value = "dear_or_bless => spam\nNOT contains_re => spam\ndefault => non-spam\n";
    buffer.dispatchEvent(new harness.dom.window.Event("input", { bubbles: true }));
    await new Promise((resolve) => setTimeout(resolve, 200));
    await harness.app.idle();
    expect(harness.root.querySelector(".rule-issue")).toBeNull();

    click(harness, "#train-button");
    await harness.app.idle();
    const run = harness.app.lastModelResponse!;
    expect(run.kind).toBe("ruleset");
    expect(run.train_metrics.accuracy).toBeCloseTo(0.6, 12);
  }, 60_000);
});

describe("error banners", () => {
  it("unreachable service surfaces a dismissible banner and preserves state", async () => {
    const harness = mountApp("http://127.0.0.1:1");
    const box = harness.root.querySelector<HTMLTextAreaElement>("#corpus-csv")!;
    box.value = SAMPLE_CORPUS_CSV;
    click(harness, 'input[data-feature="all_caps"]');
    click(harness, "#upload-corpus");
    await harness.app.idle();
    const banner = harness.root.querySelector<HTMLElement>(".banner");
    expect(banner).not.toBeNull();
    expect(banner!.dataset.code).toBe("unreachable");
    expect(harness.app.state.selectedFeatures).toEqual(["all_caps"]);
    click(harness, ".banner-close");
    expect(harness.root.querySelector(".banner")).toBeNull();
  });

  it("API errors keep their machine code", async () => {
    const harness = mountApp();
    const box = harness.root.querySelector<HTMLTextAreaElement>("#corpus-csv")!;
    box.value = "subject,label\nx,ham\n";
    click(harness, "#upload-corpus");
    await harness.app.idle();
    expect(harness.root.querySelector<HTMLElement>(".banner")?.dataset.code).toBe("bad_label");
  });
});

describe("predictions grid", () => {
  it("renders one API-provided row per subject", async () => {
    const harness = mountApp();
    await loadSample(harness);
    click(harness, 'input[data-feature="dear_or_bless"]');
    setSelect(harness, "#model-kind", "nb");
    click(harness, "#train-button");
    await harness.app.idle();
    click(harness, 'button[data-tab="predictions"]');
    const rows = harness.root.querySelectorAll("#prediction-grid tr");
    expect(rows.length).toBe(11); // header + 10 subjects
    const predictCalls = harness.calls.filter((c) => c.url.includes("/predict"));
    expect(predictCalls.length).toBe(10);
  }, 60_000);
});
