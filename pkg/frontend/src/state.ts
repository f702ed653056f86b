/**
 * UI state and the pure functions over it. Rendering reads this state plus
 * raw API responses; train request bodies are a pure function of the state,
 * so any run is exactly reproducible from a state snapshot.
 */

import type { FeatureDef, TrainRequestBody } from "./api.js";
import { FEATURE_NAMES, catalogSubset } from "./catalog.js";
import type { DraftNode } from "./tree_draft.js";
import { draftToApi, leaf } from "./tree_draft.js";

export type ModelKind = "logreg" | "nb" | "tree" | "forest" | "manual_tree" | "ruleset";
export type TabName = "coefficients" | "tree" | "predictions" | "accuracy";

/** Kinds that learn from the feature matrix and need at least one feature. */
export const STATISTICAL_KINDS: ModelKind[] = ["logreg", "nb", "tree", "forest"];

export interface Hyperparams {
  seed: number;
  lambda: number;
  alpha: number;
  max_depth: number;
  n_trees: number;
}

export interface RunRecord {
  modelId: number;
  kind: ModelKind;
  featureCount: number;
  trainAccuracy: number;
  testAccuracy: number;
}

export interface UiState {
  activeCorpusId: number | null;
  testCorpusId: number | null;
  selectedFeatures: string[];
  modelKind: ModelKind;
  hyperparams: Hyperparams;
  activeTab: TabName;
  lastTrainedModelId: number | null;
  ruleBuffer: string;
  treeDraft: DraftNode;
  trainPending: boolean;
  history: RunRecord[];
}

export function initialState(): UiState {
  return {
    activeCorpusId: null,
    testCorpusId: null,
    selectedFeatures: [],
    modelKind: "logreg",
    hyperparams: { seed: 0, lambda: 1e-4, alpha: 1.0, max_depth: 5, n_trees: 100 },
    activeTab: "accuracy",
    lastTrainedModelId: null,
    ruleBuffer: "dear_or_bless => spam\ndefault => non-spam\n",
    treeDraft: leaf("non-spam"),
    trainPending: false,
    history: [],
  };
}

/** Flip membership; selection order is first-toggled-first. */
export function toggleFeature(state: UiState, name: string): UiState {
  const selected = state.selectedFeatures.includes(name)
    ? state.selectedFeatures.filter((n) => n !== name)
    : [...state.selectedFeatures, name];
  return { ...state, selectedFeatures: selected };
}

/** The Train guard: a corpus is loaded, nothing in flight, and statistical
 * kinds have at least one feature selected. */
export function canTrain(state: UiState): boolean {
  if (state.activeCorpusId === null || state.trainPending) return false;
  if (STATISTICAL_KINDS.includes(state.modelKind)) {
    return state.selectedFeatures.length > 0;
  }
  return true;
}

/** Feature definitions to register for a train run: exactly the selection
 * for statistical kinds, the full catalog for rules and manual trees (their
 * conditions may reference any catalog feature). */
export function featureDefsForRun(state: UiState): FeatureDef[] {
  if (STATISTICAL_KINDS.includes(state.modelKind)) {
    return catalogSubset(state.selectedFeatures);
  }
  return catalogSubset(FEATURE_NAMES);
}

/** Pure state -> POST /models body. The body names its features explicitly
 * so a run is auditable and reproducible from the state alone. */
export function buildTrainRequest(state: UiState, featureSet: { id: number; feature_names: string[] }): TrainRequestBody {
  if (state.activeCorpusId === null) {
    throw new Error("no corpus loaded");
  }
  const body: TrainRequestBody = {
    kind: state.modelKind,
    feature_set: featureSet.id,
    train_corpus: state.activeCorpusId,
    test_corpus: state.testCorpusId ?? state.activeCorpusId,
    seed: state.hyperparams.seed,
    feature_names: featureSet.feature_names,
  };
  if (state.modelKind === "logreg") body.lambda = state.hyperparams.lambda;
  if (state.modelKind === "nb") body.alpha = state.hyperparams.alpha;
  if (state.modelKind === "tree" || state.modelKind === "forest") {
    body.max_depth = state.hyperparams.max_depth;
  }
  if (state.modelKind === "forest") body.n_trees = state.hyperparams.n_trees;
  if (state.modelKind === "ruleset") body.rules = state.ruleBuffer;
  if (state.modelKind === "manual_tree") body.tree = draftToApi(state.treeDraft);
  return body;
}
