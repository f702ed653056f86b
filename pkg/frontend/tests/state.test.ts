import { describe, expect, it } from "vitest";

import {
  STATISTICAL_KINDS,
  buildTrainRequest,
  canTrain,
  featureDefsForRun,
  initialState,
  toggleFeature,
} from "../src/state.js";
import type { UiState } from "../src/state.js";
import { FEATURE_NAMES } from "../src/catalog.js";

describe("toggleFeature", () => {
  it("adds then removes (involution)", () => {
    const start = initialState();
    const once = toggleFeature(start, "all_caps");
    expect(once.selectedFeatures).toEqual(["all_caps"]);
    const twice = toggleFeature(once, "all_caps");
    expect(twice.selectedFeatures).toEqual([]);
  });

  it("preserves toggle order", () => {
    let state: UiState = initialState();
    state = toggleFeature(state, "dollar");
    state = toggleFeature(state, "all_caps");
    expect(state.selectedFeatures).toEqual(["dollar", "all_caps"]);
  });

  it("does not mutate the previous state", () => {
    const start = initialState();
    toggleFeature(start, "dollar");
    expect(start.selectedFeatures).toEqual([]);
  });
});

describe("canTrain guard", () => {
  it("requires a corpus", () => {
    const state = toggleFeature(initialState(), "all_caps");
    expect(canTrain(state)).toBe(false);
    expect(canTrain({ ...state, activeCorpusId: 1 })).toBe(true);
  });

  it("statistical kinds need at least one feature", () => {
    for (const kind of STATISTICAL_KINDS) {
      const bare = { ...initialState(), activeCorpusId: 1, modelKind: kind };
      expect(canTrain(bare)).toBe(false);
      expect(canTrain(toggleFeature(bare, "dollar"))).toBe(true);
    }
  });

  it("ruleset and manual_tree train without features", () => {
    for (const kind of ["ruleset", "manual_tree"] as const) {
      const state = { ...initialState(), activeCorpusId: 1, modelKind: kind };
      expect(canTrain(state)).toBe(true);
    }
  });

  it("disabled while a train request is in flight", () => {
    const state = {
      ...toggleFeature(initialState(), "all_caps"),
      activeCorpusId: 1,
      trainPending: true,
    };
    expect(canTrain(state)).toBe(false);
  });
});

describe("buildTrainRequest", () => {
  it("is a pure function of the state", () => {
    let state: UiState = { ...initialState(), activeCorpusId: 3 };
    state = toggleFeature(state, "all_caps");
    state = toggleFeature(state, "dollar");
    const featureSet = { id: 9, feature_names: ["all_caps", "dollar"] };
    const first = buildTrainRequest(state, featureSet);
    const second = buildTrainRequest(state, featureSet);
    expect(first).toEqual(second);
    expect(first.feature_names).toEqual(["all_caps", "dollar"]);
    expect(first.kind).toBe("logreg");
    expect(first.train_corpus).toBe(3);
    expect(first.test_corpus).toBe(3);
    expect(first.lambda).toBeCloseTo(1e-4);
  });

  it("routes kind-specific payloads", () => {
    const base = { ...initialState(), activeCorpusId: 1 };
    const featureSet = { id: 1, feature_names: FEATURE_NAMES };
    const rules = buildTrainRequest({ ...base, modelKind: "ruleset" }, featureSet);
    expect(rules.rules).toContain("default =>");
    const manual = buildTrainRequest({ ...base, modelKind: "manual_tree" }, featureSet);
    expect(manual.tree).toEqual({ leaf: "non-spam" });
    const forest = buildTrainRequest(
      { ...base, modelKind: "forest", selectedFeatures: ["dollar"] },
      featureSet,
    );
    expect(forest.n_trees).toBe(100);
  });

  it("separate test corpus is honored", () => {
    const state = { ...initialState(), activeCorpusId: 1, testCorpusId: 2, modelKind: "ruleset" as const };
    const body = buildTrainRequest(state, { id: 1, feature_names: [] });
    expect(body.train_corpus).toBe(1);
    expect(body.test_corpus).toBe(2);
  });
});

describe("featureDefsForRun", () => {
  it("statistical kinds get exactly the selection", () => {
    let state: UiState = { ...initialState(), activeCorpusId: 1 };
    state = toggleFeature(state, "dollar");
    state = toggleFeature(state, "all_caps");
    const names = featureDefsForRun(state).map((d) => d.name);
    expect(names.sort()).toEqual(["all_caps", "dollar"]);
  });

  it("rule-based kinds get the full catalog", () => {
    const state = { ...initialState(), activeCorpusId: 1, modelKind: "ruleset" as const };
    expect(featureDefsForRun(state).map((d) => d.name)).toEqual(FEATURE_NAMES);
  });
});
