/**
 * View state for one loaded bundle.
 *
 * Highlight sets are exposed as getters that recompute from the bundle's
 * annotations on every access, so they can never go stale with respect to
 * the current selection, mode, or deep toggle.
 */

import {
  backwardSlice,
  forwardSliceOfCell,
  parseValuePath,
  resolveValue,
  staticSlice,
} from "./slicing.js";
import { SliceBundle, ViewMode, annOf } from "./types.js";

export type Selection =
  | { kind: "none" }
  | { kind: "output"; path: string }
  | { kind: "input"; path: string }
  | { kind: "output-type"; path: string };

export class BundleView {
  readonly bundle: SliceBundle;
  mode: ViewMode = "dynamic";
  deep = false;
  private selection: Selection = { kind: "none" };

  constructor(bundle: SliceBundle) {
    this.bundle = bundle;
  }

  get selected(): Selection {
    return this.selection;
  }

  /** Select an output node; input cells of its backward slice highlight. */
  selectOutput(path: string): void {
    this.selection = { kind: "output", path };
  }

  /** Select an input cell; output nodes of its forward slice highlight. */
  selectInput(path: string): void {
    this.selection = { kind: "input", path };
  }

  /** Static mode: select an output type node. */
  selectOutputType(path: string): void {
    this.selection = { kind: "output-type", path };
  }

  clearSelection(): void {
    this.selection = { kind: "none" };
  }

  /** Input paths to highlight (dynamic backward slice of the selection). */
  get inputHighlights(): ReadonlySet<string> {
    if (this.selection.kind !== "output") return new Set();
    return new Set(
      backwardSlice(this.bundle.env, this.bundle.output, this.selection.path, this.deep),
    );
  }

  /** Output paths to highlight (forward slice of the selected input cell). */
  get outputHighlights(): ReadonlySet<string> {
    if (this.selection.kind !== "input") return new Set();
    return new Set(forwardSliceOfCell(this.bundle.env, this.bundle.output, this.selection.path));
  }

  /** Context type paths to highlight (static slice of the selected type node). */
  get typeHighlights(): ReadonlySet<string> {
    if (this.selection.kind !== "output-type") return new Set();
    const { actx, atype_json } = this.bundle;
    if (!actx || !atype_json) return new Set();
    return new Set(staticSlice(actx, atype_json, this.selection.path));
  }

  /** Colors carried by the current selection, for the status bar. */
  get statusColors(): string[] {
    switch (this.selection.kind) {
      case "output": {
        const node = resolveValue(this.bundle.output, parseValuePath(this.selection.path));
        return [...annOf(node)].sort();
      }
      case "input": {
        const path = parseValuePath(this.selection.path);
        const value = this.bundle.env[path.root];
        if (value === undefined) return [];
        return [...annOf(resolveValue(value, path))].sort();
      }
      default:
        return [];
    }
  }
}
