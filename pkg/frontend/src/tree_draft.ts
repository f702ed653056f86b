/**
 * Manual-tree editor model. A draft is a well-formed binary tree by
 * construction; edits that would break it are rejected locally with
 * DraftError before any network traffic happens.
 */

import type { ApiTreeNode } from "./api.js";

export type Verdict = "spam" | "non-spam";

export type DraftNode =
  | { kind: "leaf"; verdict: Verdict }
  | { kind: "split"; feature: string; trueChild: DraftNode; falseChild: DraftNode };

/** Path from the root: each step picks the true or false branch. */
export type DraftPath = ("true" | "false")[];

export type TreeEdit =
  | { action: "add_split"; path: DraftPath; feature: string }
  | { action: "set_leaf_verdict"; path: DraftPath; verdict: Verdict }
  | { action: "remove_node"; path: DraftPath };

export class DraftError extends Error {}

export function leaf(verdict: Verdict = "non-spam"): DraftNode {
  return { kind: "leaf", verdict };
}

export function nodeAt(draft: DraftNode, path: DraftPath): DraftNode {
  let node = draft;
  for (const step of path) {
    if (node.kind !== "split") {
      throw new DraftError(`path runs past a leaf at ${path.join("/") || "root"}`);
    }
    node = step === "true" ? node.trueChild : node.falseChild;
  }
  return node;
}

function replaceAt(draft: DraftNode, path: DraftPath, replacement: DraftNode): DraftNode {
  if (path.length === 0) return replacement;
  if (draft.kind !== "split") {
    throw new DraftError("path runs past a leaf");
  }
  const [step, ...rest] = path;
  return step === "true"
    ? { ...draft, trueChild: replaceAt(draft.trueChild, rest, replacement) }
    : { ...draft, falseChild: replaceAt(draft.falseChild, rest, replacement) };
}

/** Apply one edit, returning the new draft. Throws DraftError when the edit
 * does not fit the current tree shape (the UI surfaces this inline). */
export function applyEdit(draft: DraftNode, edit: TreeEdit, knownFeatures: string[]): DraftNode {
  const target = nodeAt(draft, edit.path);
  switch (edit.action) {
    case "add_split": {
      if (target.kind !== "leaf") {
        throw new DraftError("only a leaf can be split");
      }
      if (!knownFeatures.includes(edit.feature)) {
        throw new DraftError(`unknown feature ${edit.feature}`);
      }
      const split: DraftNode = {
        kind: "split",
        feature: edit.feature,
        trueChild: leaf(target.verdict),
        falseChild: leaf(target.verdict),
      };
      return replaceAt(draft, edit.path, split);
    }
    case "set_leaf_verdict": {
      if (target.kind !== "leaf") {
        throw new DraftError("verdicts belong to leaves");
      }
      return replaceAt(draft, edit.path, leaf(edit.verdict));
    }
    case "remove_node": {
      if (target.kind !== "split") {
        throw new DraftError("only a split can be removed");
      }
      const collapsed: Verdict =
        target.falseChild.kind === "leaf" ? target.falseChild.verdict : "non-spam";
      return replaceAt(draft, edit.path, leaf(collapsed));
    }
  }
}

export function draftToApi(draft: DraftNode): ApiTreeNode {
  if (draft.kind === "leaf") {
    return { leaf: draft.verdict };
  }
  return {
    split: draft.feature,
    true: draftToApi(draft.trueChild),
    false: draftToApi(draft.falseChild),
  };
}

export function featuresUsed(draft: DraftNode): string[] {
  if (draft.kind === "leaf") return [];
  return [draft.feature, ...featuresUsed(draft.trueChild), ...featuresUsed(draft.falseChild)];
}
