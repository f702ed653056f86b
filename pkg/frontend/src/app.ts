/**
 * DOM wiring for the workbench UI.
 *
 * Layout: sidebar (corpus, feature toggles, model picker, run history) and a
 * content column (rule/tree editors, then four result tabs). All dynamic
 * regions re-render from `state` plus the raw API responses of the last run;
 * no label, score, or metric is computed in the browser.
 */

import { ApiError, ServiceClient } from "./api.js";
import type {
  ApiTreeNode,
  MetricsBlock,
  ModelMetricsResponse,
  ModelResponse,
  PredictResponse,
} from "./api.js";
import { FEATURE_NAMES, SAMPLE_CORPUS_CSV, parseCorpusCsv } from "./catalog.js";
import type { ParsedSubject } from "./catalog.js";
import {
  buildTrainRequest,
  canTrain,
  featureDefsForRun,
  initialState,
  toggleFeature,
} from "./state.js";
import type { ModelKind, TabName, UiState } from "./state.js";
import { DraftError, applyEdit, draftToApi } from "./tree_draft.js";
import type { DraftNode, DraftPath, TreeEdit } from "./tree_draft.js";

const TABS: { id: TabName; label: string }[] = [
  { id: "coefficients", label: "Coefficients" },
  { id: "tree", label: "Tree" },
  { id: "predictions", label: "Predictions" },
  { id: "accuracy", label: "Accuracy" },
];

const MODEL_KINDS: { id: ModelKind; label: string }[] = [
  { id: "logreg", label: "logistic regression" },
  { id: "nb", label: "naive Bayes" },
  { id: "tree", label: "decision tree" },
  { id: "forest", label: "random forest" },
  { id: "manual_tree", label: "manual tree" },
  { id: "ruleset", label: "ruleset" },
];

const PREDICTION_LIMIT = 100;

export interface AppOptions {
  debounceMs?: number;
}

interface RuleIssue {
  line: number;
  position: number;
  message: string;
  text: string;
}

export interface Banner {
  code: string;
  message: string;
}

export class App {
  state: UiState = initialState();
  subjects: ParsedSubject[] = [];
  banner: Banner | null = null;
  lastModelResponse: ModelResponse | null = null;
  lastMetricsResponse: ModelMetricsResponse | null = null;
  lastPredictions: { subject: ParsedSubject; result: PredictResponse }[] = [];
  treePreview: MetricsBlock | null = null;
  treeEditorError: string | null = null;
  ruleIssues: RuleIssue[] = [];

  private readonly doc: Document;
  private readonly debounceMs: number;
  private queue: Promise<void> = Promise.resolve();
  private ruleEpoch = 0;
  private ruleTimer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private readonly root: HTMLElement,
    readonly client: ServiceClient,
    options: AppOptions = {},
  ) {
    this.doc = root.ownerDocument;
    this.debounceMs = options.debounceMs ?? 300;
    this.buildSkeleton();
    this.render();
  }

  /** Resolves once every queued async action (train, previews) has settled. */
  idle(): Promise<void> {
    return this.queue;
  }

  private enqueue(work: () => Promise<void>): Promise<void> {
    this.queue = this.queue.then(work, work);
    return this.queue;
  }

  // ------------------------------------------------------------- actions

  loadSampleCorpus(): Promise<void> {
    const box = this.textarea("corpus-csv");
    box.value = SAMPLE_CORPUS_CSV;
    return this.uploadCorpus();
  }

  uploadCorpus(): Promise<void> {
    const csv = this.textarea("corpus-csv").value;
    return this.enqueue(async () => {
      try {
        const summary = await this.client.uploadCorpus(csv, "webui");
        this.state = { ...this.state, activeCorpusId: summary.id };
        this.subjects = parseCorpusCsv(csv);
        this.banner = null;
        const spamShare = (summary.class_balance * 100).toFixed(1);
        this.el("corpus-summary").textContent =
          `corpus #${summary.id}: ${summary.size} subjects, ${spamShare}% spam`;
      } catch (err) {
        this.showError(err);
      }
      this.render();
    });
  }

  toggle(name: string): void {
    this.state = toggleFeature(this.state, name);
    this.render();
  }

  setModelKind(kind: ModelKind): void {
    this.state = { ...this.state, modelKind: kind };
    this.render();
  }

  selectTab(tab: TabName): void {
    this.state = { ...this.state, activeTab: tab };
    this.render();
  }

  dismissBanner(): void {
    this.banner = null;
    this.render();
  }

  train(): Promise<void> {
    if (!canTrain(this.state)) return this.idle();
    this.state = { ...this.state, trainPending: true };
    this.render();
    return this.enqueue(async () => {
      try {
        const defs = featureDefsForRun(this.state);
        const featureSet = await this.client.createFeatureSet(defs);
        const body = buildTrainRequest(this.state, featureSet);
        const model = await this.client.trainModel(body);
        const metrics = await this.client.modelMetrics(model.id);
        const predictions: { subject: ParsedSubject; result: PredictResponse }[] = [];
        for (const subject of this.subjects.slice(0, PREDICTION_LIMIT)) {
          predictions.push({
            subject,
            result: await this.client.predict(model.id, subject.text),
          });
        }
        this.lastModelResponse = model;
        this.lastMetricsResponse = metrics;
        this.lastPredictions = predictions;
        this.state = {
          ...this.state,
          trainPending: false,
          lastTrainedModelId: model.id,
          history: [
            ...this.state.history,
            {
              modelId: model.id,
              kind: this.state.modelKind,
              featureCount: model.feature_names.length,
              trainAccuracy: metrics.train.accuracy,
              testAccuracy: metrics.test.accuracy,
            },
          ],
        };
      } catch (err) {
        this.state = { ...this.state, trainPending: false };
        this.showError(err);
      }
      this.render();
    });
  }

  /** Manual-tree edit: local validation first, then a live metric preview
   * via a throwaway manual_tree model on the active corpus. */
  editTree(edit: TreeEdit): Promise<void> {
    try {
      this.state = {
        ...this.state,
        treeDraft: applyEdit(this.state.treeDraft, edit, FEATURE_NAMES),
      };
      this.treeEditorError = null;
    } catch (err) {
      if (err instanceof DraftError) {
        this.treeEditorError = err.message;
        this.render();
        return this.idle();
      }
      throw err;
    }
    this.render();
    if (this.state.activeCorpusId === null) return this.idle();
    return this.enqueue(async () => {
      try {
        const preview = await this.previewTreeDraft(this.state.treeDraft);
        this.treePreview = preview.train_metrics;
      } catch (err) {
        this.showError(err);
      }
      this.render();
    });
  }

  /** Train a manual_tree model for the current draft and return the response
   * (also used by the editor preview). */
  async previewTreeDraft(draft: DraftNode): Promise<ModelResponse> {
    const featureSet = await this.client.createFeatureSet(
      featureDefsForRun({ ...this.state, modelKind: "manual_tree" }),
    );
    const corpusId = this.state.activeCorpusId;
    if (corpusId === null) throw new Error("no corpus loaded");
    return this.client.trainModel({
      kind: "manual_tree",
      feature_set: featureSet.id,
      train_corpus: corpusId,
      test_corpus: this.state.testCorpusId ?? corpusId,
      seed: this.state.hyperparams.seed,
      feature_names: featureSet.feature_names,
      tree: draftToApi(draft) as unknown as Record<string, unknown>,
    });
  }

  setRuleBuffer(text: string): void {
    this.state = { ...this.state, ruleBuffer: text };
    if (this.ruleTimer !== null) clearTimeout(this.ruleTimer);
    const epoch = ++this.ruleEpoch;
    this.ruleTimer = setTimeout(() => {
      void this.enqueue(() => this.validateRules(epoch));
    }, this.debounceMs);
  }

  private async validateRules(epoch: number): Promise<void> {
    const issues: RuleIssue[] = [];
    const lines = this.state.ruleBuffer.split("\n");
    for (let i = 0; i < lines.length; i++) {
      const line = lines[i] ?? "";
      const trimmed = line.trim();
      if (!trimmed || trimmed.startsWith("#")) continue;
      const arrow = line.indexOf("=>");
      const condition = arrow >= 0 ? line.slice(0, arrow) : line;
      if (condition.trim() === "default") continue;
      try {
        await this.client.parseRule(condition.trimEnd());
      } catch (err) {
        if (err instanceof ApiError && err.code === "syntax_error") {
          issues.push({
            line: i + 1,
            position: err.position ?? 0,
            message: err.message,
            text: line,
          });
        } else {
          this.showError(err);
        }
      }
    }
    if (epoch === this.ruleEpoch) {
      this.ruleIssues = issues;
      this.render();
    }
  }

  private showError(err: unknown): void {
    if (err instanceof ApiError) {
      this.banner = { code: err.code, message: err.message };
    } else {
      this.banner = { code: "client_error", message: String(err) };
    }
  }

  // ------------------------------------------------------------ skeleton

  private buildSkeleton(): void {
    this.root.innerHTML = `
      <header class="topbar">
        <h1>spamlab</h1>
        <div id="banner-area"></div>
      </header>
      <main class="columns">
        <aside class="sidebar">
          <section class="panel">
            <h2>Corpus</h2>
            <textarea id="corpus-csv" rows="5" placeholder="subject,label CSV"></textarea>
            <div class="row">
              <button id="load-sample">Load sample</button>
              <button id="upload-corpus">Upload</button>
            </div>
            <div id="corpus-summary" class="hint"></div>
          </section>
          <section class="panel">
            <h2>Features</h2>
            <div id="feature-checkboxes"></div>
          </section>
          <section class="panel">
            <h2>Model</h2>
            <select id="model-kind"></select>
            <div id="hyperparams"></div>
            <button id="train-button">Train</button>
          </section>
          <section class="panel">
            <h2>Runs</h2>
            <ol id="history-strip"></ol>
          </section>
        </aside>
        <section class="content">
          <section id="rule-editor-panel" class="panel" hidden>
            <h2>Ruleset</h2>
            <textarea id="rule-buffer" rows="6" spellcheck="false"></textarea>
            <div id="rule-errors"></div>
          </section>
          <section id="tree-editor-panel" class="panel" hidden>
            <h2>Manual tree</h2>
            <div id="tree-editor"></div>
            <div id="tree-editor-error" class="error-text"></div>
            <div id="tree-preview" class="hint"></div>
          </section>
          <nav id="tabs"></nav>
          <div id="tab-content"></div>
        </section>
      </main>
    `;
    this.el("load-sample").addEventListener("click", () => void this.loadSampleCorpus());
    this.el("upload-corpus").addEventListener("click", () => void this.uploadCorpus());
    this.el("train-button").addEventListener("click", () => void this.train());

    const kindSelect = this.el("model-kind") as HTMLSelectElement;
    for (const kind of MODEL_KINDS) {
      const option = this.doc.createElement("option");
      option.value = kind.id;
      option.textContent = kind.label;
      kindSelect.appendChild(option);
    }
    kindSelect.addEventListener("change", () => {
      this.setModelKind(kindSelect.value as ModelKind);
    });

    const checkboxes = this.el("feature-checkboxes");
    for (const name of FEATURE_NAMES) {
      const label = this.doc.createElement("label");
      label.className = "feature-toggle";
      const box = this.doc.createElement("input");
      box.type = "checkbox";
      box.dataset.feature = name;
      box.addEventListener("change", () => this.toggle(name));
      label.appendChild(box);
      label.appendChild(this.doc.createTextNode(` ${name}`));
      checkboxes.appendChild(label);
    }

    const tabs = this.el("tabs");
    for (const tab of TABS) {
      const button = this.doc.createElement("button");
      button.dataset.tab = tab.id;
      button.textContent = tab.label;
      button.addEventListener("click", () => this.selectTab(tab.id));
      tabs.appendChild(button);
    }

    const ruleBox = this.textarea("rule-buffer");
    ruleBox.value = this.state.ruleBuffer;
    ruleBox.addEventListener("input", () => this.setRuleBuffer(ruleBox.value));

    const params = this.el("hyperparams");
    params.innerHTML = `
      <label>seed <input id="hp-seed" type="number" value="0"></label>
      <label>lambda <input id="hp-lambda" type="number" value="0.0001" step="0.0001"></label>
      <label>trees <input id="hp-ntrees" type="number" value="100"></label>
      <label>depth <input id="hp-depth" type="number" value="5"></label>
    `;
    for (const [id, key] of [
      ["hp-seed", "seed"],
      ["hp-lambda", "lambda"],
      ["hp-ntrees", "n_trees"],
      ["hp-depth", "max_depth"],
    ] as const) {
      const input = this.el(id) as HTMLInputElement;
      input.addEventListener("change", () => {
        const value = Number(input.value);
        if (Number.isFinite(value)) {
          this.state = {
            ...this.state,
            hyperparams: { ...this.state.hyperparams, [key]: value },
          };
        }
      });
    }
  }

  // ------------------------------------------------------------- render

  render(): void {
    this.renderBanner();
    this.renderFeatures();
    this.renderTrainButton();
    this.renderEditors();
    this.renderHistory();
    this.renderTabs();
  }

  private renderBanner(): void {
    const area = this.el("banner-area");
    area.innerHTML = "";
    if (!this.banner) return;
    const div = this.doc.createElement("div");
    div.className = "banner";
    div.dataset.code = this.banner.code;
    div.textContent = `${this.banner.code}: ${this.banner.message} `;
    const close = this.doc.createElement("button");
    close.textContent = "×";
    close.className = "banner-close";
    close.addEventListener("click", () => this.dismissBanner());
    div.appendChild(close);
    area.appendChild(div);
  }

  private renderFeatures(): void {
    for (const name of FEATURE_NAMES) {
      const box = this.root.querySelector<HTMLInputElement>(`input[data-feature="${name}"]`);
      if (box) box.checked = this.state.selectedFeatures.includes(name);
    }
  }

  private renderTrainButton(): void {
    const button = this.el("train-button") as HTMLButtonElement;
    button.disabled = !canTrain(this.state);
    button.textContent = this.state.trainPending ? "Training…" : "Train";
    const kindSelect = this.el("model-kind") as HTMLSelectElement;
    kindSelect.value = this.state.modelKind;
  }

  private renderEditors(): void {
    (this.el("rule-editor-panel") as HTMLElement).hidden = this.state.modelKind !== "ruleset";
    (this.el("tree-editor-panel") as HTMLElement).hidden = this.state.modelKind !== "manual_tree";
    this.renderRuleErrors();
    this.renderTreeEditor();
  }

  private renderRuleErrors(): void {
    const area = this.el("rule-errors");
    area.innerHTML = "";
    for (const issue of this.ruleIssues) {
      const block = this.doc.createElement("pre");
      block.className = "rule-issue";
      block.dataset.line = String(issue.line);
      block.dataset.position = String(issue.position);
      const caret = " ".repeat(issue.position) + "^";
      block.textContent = `line ${issue.line}: ${issue.message}\n${issue.text}\n${caret}`;
      area.appendChild(block);
    }
  }

  private renderTreeEditor(): void {
    const host = this.el("tree-editor");
    host.innerHTML = "";
    host.appendChild(this.treeNodeEditor(this.state.treeDraft, []));
    this.el("tree-editor-error").textContent = this.treeEditorError ?? "";
    const preview = this.el("tree-preview");
    if (this.treePreview) {
      const sens = this.treePreview.sensitivity;
      preview.textContent =
        `train MCR ${this.treePreview.mcr.toFixed(3)} · ` +
        `sensitivity ${sens === null ? "n/a" : sens.toFixed(3)}`;
    } else {
      preview.textContent = "";
    }
  }

  private treeNodeEditor(node: DraftNode, path: DraftPath): HTMLElement {
    const container = this.doc.createElement("div");
    container.className = `tree-node tree-${node.kind}`;
    container.dataset.path = path.join("/") || "root";
    if (node.kind === "leaf") {
      const verdict = this.doc.createElement("select");
      verdict.className = "leaf-verdict";
      for (const value of ["spam", "non-spam"]) {
        const option = this.doc.createElement("option");
        option.value = value;
        option.textContent = value;
        verdict.appendChild(option);
      }
      verdict.value = node.verdict;
      verdict.addEventListener("change", () => {
        void this.editTree({
          action: "set_leaf_verdict",
          path,
          verdict: verdict.value as "spam" | "non-spam",
        });
      });
      container.appendChild(this.doc.createTextNode("leaf → "));
      container.appendChild(verdict);

      const featurePick = this.doc.createElement("select");
      featurePick.className = "split-feature";
      for (const name of FEATURE_NAMES) {
        const option = this.doc.createElement("option");
        option.value = name;
        option.textContent = name;
        featurePick.appendChild(option);
      }
      const splitButton = this.doc.createElement("button");
      splitButton.className = "add-split";
      splitButton.textContent = "Split";
      splitButton.addEventListener("click", () => {
        void this.editTree({ action: "add_split", path, feature: featurePick.value });
      });
      container.appendChild(featurePick);
      container.appendChild(splitButton);
    } else {
      const header = this.doc.createElement("div");
      header.className = "split-header";
      header.textContent = `split on ${node.feature} `;
      const remove = this.doc.createElement("button");
      remove.className = "remove-node";
      remove.textContent = "Remove";
      remove.addEventListener("click", () => {
        void this.editTree({ action: "remove_node", path });
      });
      header.appendChild(remove);
      container.appendChild(header);
      const trueBranch = this.doc.createElement("div");
      trueBranch.className = "branch";
      trueBranch.appendChild(this.doc.createTextNode("true:"));
      trueBranch.appendChild(this.treeNodeEditor(node.trueChild, [...path, "true"]));
      const falseBranch = this.doc.createElement("div");
      falseBranch.className = "branch";
      falseBranch.appendChild(this.doc.createTextNode("false:"));
      falseBranch.appendChild(this.treeNodeEditor(node.falseChild, [...path, "false"]));
      container.appendChild(trueBranch);
      container.appendChild(falseBranch);
    }
    return container;
  }

  private renderHistory(): void {
    const strip = this.el("history-strip");
    strip.innerHTML = "";
    for (const run of this.state.history) {
      const item = this.doc.createElement("li");
      item.dataset.modelId = String(run.modelId);
      item.textContent =
        `#${run.modelId} ${run.kind} · ${run.featureCount} features · ` +
        `train ${run.trainAccuracy.toFixed(3)} · test ${run.testAccuracy.toFixed(3)}`;
      strip.appendChild(item);
    }
  }

  private renderTabs(): void {
    for (const tab of TABS) {
      const button = this.root.querySelector<HTMLButtonElement>(`button[data-tab="${tab.id}"]`);
      if (button) button.classList.toggle("active", tab.id === this.state.activeTab);
    }
    const content = this.el("tab-content");
    content.innerHTML = "";
    switch (this.state.activeTab) {
      case "coefficients":
        content.appendChild(this.coefficientsView());
        break;
      case "tree":
        content.appendChild(this.treeView());
        break;
      case "predictions":
        content.appendChild(this.predictionsView());
        break;
      case "accuracy":
        content.appendChild(this.accuracyView());
        break;
    }
  }

  private placeholder(text: string): HTMLElement {
    const div = this.doc.createElement("div");
    div.className = "hint";
    div.textContent = text;
    return div;
  }

  private coefficientsView(): HTMLElement {
    const model = this.lastModelResponse;
    if (!model) return this.placeholder("Train a model to see its parameters.");
    if (model.kind === "logreg") {
      const weights = model.payload.weights as number[];
      const table = this.doc.createElement("table");
      table.id = "coefficient-table";
      table.innerHTML = "<tr><th>feature</th><th>weight</th></tr>";
      model.feature_names.forEach((name, i) => {
        const row = this.doc.createElement("tr");
        row.innerHTML = `<td>${name}</td><td>${(weights[i] ?? 0).toFixed(4)}</td>`;
        table.appendChild(row);
      });
      const interceptRow = this.doc.createElement("tr");
      const intercept = model.payload.intercept as number;
      interceptRow.innerHTML = `<td>(intercept)</td><td>${intercept.toFixed(4)}</td>`;
      table.appendChild(interceptRow);
      return table;
    }
    if (model.kind === "ruleset") {
      const list = this.doc.createElement("ol");
      const clauses = model.payload.clauses as { condition: string; verdict: string }[];
      for (const clause of clauses) {
        const item = this.doc.createElement("li");
        item.textContent = `${clause.condition} ⇒ ${clause.verdict}`;
        list.appendChild(item);
      }
      const fallback = this.doc.createElement("li");
      fallback.textContent = `default ⇒ ${model.payload.default as string}`;
      list.appendChild(fallback);
      return list;
    }
    return this.placeholder(`No coefficient view for ${model.kind}; see the Tree tab.`);
  }

  private treeView(): HTMLElement {
    const model = this.lastModelResponse;
    if (!model) return this.placeholder("Train a model to see its structure.");
    if (model.kind === "tree" || model.kind === "manual_tree") {
      return this.treeDiagram(model.payload.tree as ApiTreeNode);
    }
    if (model.kind === "forest") {
      const wrap = this.doc.createElement("div");
      const trees = model.payload.trees as ApiTreeNode[];
      const summary = this.doc.createElement("p");
      summary.textContent =
        `forest of ${model.payload.n_trees as number} trees, ` +
        `mtry ${model.payload.mtry as number}; showing tree 1`;
      wrap.appendChild(summary);
      if (trees.length > 0) wrap.appendChild(this.treeDiagram(trees[0]!));
      return wrap;
    }
    return this.placeholder(`No tree view for ${model.kind}.`);
  }

  private treeDiagram(node: ApiTreeNode): HTMLElement {
    if ("leaf" in node) {
      const div = this.doc.createElement("div");
      div.className = "diagram-leaf";
      const counts = node.train_counts;
      div.textContent = counts
        ? `${node.leaf} (spam ${counts.spam} / non-spam ${counts.non_spam})`
        : node.leaf;
      return div;
    }
    const details = this.doc.createElement("details");
    details.open = true;
    const summary = this.doc.createElement("summary");
    summary.textContent = node.split;
    details.appendChild(summary);
    const trueSide = this.doc.createElement("div");
    trueSide.className = "branch";
    trueSide.appendChild(this.doc.createTextNode("true: "));
    trueSide.appendChild(this.treeDiagram(node.true));
    const falseSide = this.doc.createElement("div");
    falseSide.className = "branch";
    falseSide.appendChild(this.doc.createTextNode("false: "));
    falseSide.appendChild(this.treeDiagram(node.false));
    details.appendChild(trueSide);
    details.appendChild(falseSide);
    return details;
  }

  private predictionsView(): HTMLElement {
    if (this.lastPredictions.length === 0) {
      return this.placeholder("Train a model to see per-subject predictions.");
    }
    const table = this.doc.createElement("table");
    table.id = "prediction-grid";
    table.innerHTML = "<tr><th>subject</th><th>label</th><th>predicted</th><th>score</th><th></th></tr>";
    for (const { subject, result } of this.lastPredictions) {
      const row = this.doc.createElement("tr");
      const ok = subject.label === result.label;
      row.innerHTML =
        `<td>${escapeHtml(subject.text)}</td><td>${subject.label}</td>` +
        `<td>${result.label}</td><td>${result.score.toFixed(3)}</td>` +
        `<td>${ok ? "✓" : "✗"}</td>`;
      table.appendChild(row);
    }
    return table;
  }

  private accuracyView(): HTMLElement {
    const metrics = this.lastMetricsResponse;
    if (!metrics) return this.placeholder("Train a model to see its accuracy.");
    const wrap = this.doc.createElement("div");
    wrap.className = "accuracy-panels";
    wrap.appendChild(this.metricsPanel("train", metrics.train));
    wrap.appendChild(this.metricsPanel("test", metrics.test));
    return wrap;
  }

  private metricsPanel(side: "train" | "test", block: MetricsBlock): HTMLElement {
    const panel = this.doc.createElement("div");
    panel.className = "metrics-panel";
    panel.dataset.side = side;
    const fmt = (v: number | null) => (v === null ? "n/a" : v.toFixed(3));
    panel.innerHTML = `
      <h3>${side}</h3>
      <dl>
        <dt>accuracy</dt><dd data-metric="accuracy">${fmt(block.accuracy)}</dd>
        <dt>MCR</dt><dd data-metric="mcr">${fmt(block.mcr)}</dd>
        <dt>sensitivity</dt><dd data-metric="sensitivity">${fmt(block.sensitivity)}</dd>
        <dt>specificity</dt><dd data-metric="specificity">${fmt(block.specificity)}</dd>
      </dl>
      <table class="confusion">
        <tr><th></th><th>pred spam</th><th>pred non-spam</th></tr>
        <tr><th>spam</th><td data-cell="tp">${block.confusion.tp}</td><td data-cell="fn">${block.confusion.fn}</td></tr>
        <tr><th>non-spam</th><td data-cell="fp">${block.confusion.fp}</td><td data-cell="tn">${block.confusion.tn}</td></tr>
      </table>
    `;
    return panel;
  }

  // -------------------------------------------------------------- utils

  private el(id: string): HTMLElement {
    const found = this.root.querySelector<HTMLElement>(`#${id}`);
    if (!found) throw new Error(`missing element #${id}`);
    return found;
  }

  private textarea(id: string): HTMLTextAreaElement {
    return this.el(id) as HTMLTextAreaElement;
  }
}

function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

export function createApp(
  root: HTMLElement,
  client: ServiceClient,
  options: AppOptions = {},
): App {
  return new App(root, client, options);
}
