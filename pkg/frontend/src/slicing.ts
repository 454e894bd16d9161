/**
 * Client-side slice computation over bundle annotations.
 *
 * This mirrors the engine's slicing semantics exactly: a backward slice
 * collects every input path whose node annotation intersects the selected
 * output node's annotation (optionally the whole subtree's colors); a
 * forward slice collects every output path whose node annotation contains
 * the selected color. Highlight sets are always recomputed from the
 * annotations in the bundle, never from cached state.
 */

import { ATypeNode, AValueNode, annOf } from "./types.js";

export type ValueStep = { kind: "field"; name: string } | { kind: "index"; index: number };
export interface ValuePath {
  root: string;
  steps: ValueStep[];
}

export const OUTPUT_ROOT = "result";

export function parseValuePath(text: string): ValuePath {
  const rootMatch = /^[A-Za-z_][A-Za-z0-9_]*/.exec(text);
  if (!rootMatch) throw new Error(`malformed path ${JSON.stringify(text)}`);
  const steps: ValueStep[] = [];
  let pos = rootMatch[0].length;
  const token = /\[(\d+)\]|\.([A-Za-z_][A-Za-z0-9_]*)/y;
  while (pos < text.length) {
    token.lastIndex = pos;
    const m = token.exec(text);
    if (!m) throw new Error(`malformed path ${JSON.stringify(text)} at offset ${pos}`);
    steps.push(
      m[1] !== undefined
        ? { kind: "index", index: Number(m[1]) }
        : { kind: "field", name: m[2] as string },
    );
    pos = token.lastIndex;
  }
  return { root: rootMatch[0], steps };
}

export function renderValuePath(path: ValuePath): string {
  let out = path.root;
  for (const s of path.steps) {
    out += s.kind === "index" ? `[${s.index}]` : `.${s.name}`;
  }
  return out;
}

export function resolveValue(node: AValueNode, path: ValuePath): AValueNode {
  let cur = node;
  for (const step of path.steps) {
    const raw = cur.w;
    if (step.kind === "field" && typeof raw === "object" && raw !== null && "rec" in raw) {
      const next = raw.rec[step.name];
      if (next === undefined) throw new Error(`no field ${step.name}`);
      cur = next;
    } else if (step.kind === "index" && typeof raw === "object" && raw !== null && "bag" in raw) {
      const next = raw.bag[step.index];
      if (next === undefined) throw new Error(`index ${step.index} out of range`);
      cur = next;
    } else {
      throw new Error(`path step does not match the value's shape`);
    }
  }
  return cur;
}

/** All (path string, node) pairs of a value tree in preorder. */
export function valuePaths(node: AValueNode, root: string): Array<[string, AValueNode]> {
  const out: Array<[string, AValueNode]> = [];
  const walk = (n: AValueNode, path: string): void => {
    out.push([path, n]);
    const raw = n.w;
    if (typeof raw === "object" && raw !== null) {
      if ("rec" in raw) {
        for (const [name, child] of Object.entries(raw.rec)) walk(child, `${path}.${name}`);
      } else {
        raw.bag.forEach((child, i) => walk(child, `${path}[${i}]`));
      }
    }
  };
  walk(node, root);
  return out;
}

export function colorsOfSubtree(node: AValueNode): Set<string> {
  const out = new Set<string>(node.ann ?? []);
  const raw = node.w;
  if (typeof raw === "object" && raw !== null) {
    const children = "rec" in raw ? Object.values(raw.rec) : raw.bag;
    for (const child of children) {
      for (const c of colorsOfSubtree(child)) out.add(c);
    }
  }
  return out;
}

function intersects(a: ReadonlySet<string>, b: ReadonlySet<string>): boolean {
  for (const x of a) if (b.has(x)) return true;
  return false;
}

/** Input paths whose own annotation intersects the selected output node's. */
export function backwardSlice(
  env: Record<string, AValueNode>,
  output: AValueNode,
  at: string,
  deep = false,
): string[] {
  const path = parseValuePath(at);
  if (path.root !== OUTPUT_ROOT) {
    throw new Error(`output paths are rooted at ${JSON.stringify(OUTPUT_ROOT)}`);
  }
  const node = resolveValue(output, path);
  const wanted = deep ? colorsOfSubtree(node) : annOf(node);
  const hits: string[] = [];
  for (const [name, value] of Object.entries(env)) {
    for (const [p, n] of valuePaths(value, name)) {
      if (intersects(annOf(n), wanted)) hits.push(p);
    }
  }
  return hits.sort();
}

/** Output paths whose node annotation contains the color. */
export function forwardSlice(output: AValueNode, color: string): string[] {
  const hits: string[] = [];
  for (const [p, n] of valuePaths(output, OUTPUT_ROOT)) {
    if (annOf(n).has(color)) hits.push(p);
  }
  return hits.sort();
}

/** Forward slice of every color on the selected input cell, unioned. */
export function forwardSliceOfCell(
  env: Record<string, AValueNode>,
  output: AValueNode,
  cellPath: string,
): string[] {
  const path = parseValuePath(cellPath);
  const value = env[path.root];
  if (value === undefined) throw new Error(`unknown variable ${path.root}`);
  const node = resolveValue(value, path);
  const hits = new Set<string>();
  for (const c of annOf(node)) {
    for (const p of forwardSlice(output, c)) hits.add(p);
  }
  return [...hits].sort();
}

// ---------------------------------------------------------------------------
// Type paths and static slices

export type TypeStep = { kind: "field"; name: string } | { kind: "elem" };
export interface TypePath {
  root: string;
  steps: TypeStep[];
}

export function parseTypePath(text: string): TypePath {
  const vp = parseValuePath(text);
  const steps: TypeStep[] = vp.steps.map((s) => {
    if (s.kind === "index") throw new Error("type paths cannot contain an index");
    return s.name === "elem" ? { kind: "elem" } : { kind: "field", name: s.name };
  });
  return { root: vp.root, steps };
}

export function resolveType(node: ATypeNode, path: TypePath): ATypeNode {
  let cur = node;
  for (const step of path.steps) {
    const raw = cur.t;
    if (step.kind === "field" && typeof raw === "object" && "rec" in raw) {
      const next = raw.rec[step.name];
      if (next === undefined) throw new Error(`no field ${step.name}`);
      cur = next;
    } else if (step.kind === "elem" && typeof raw === "object" && "bag" in raw) {
      cur = raw.bag;
    } else {
      throw new Error("type path step does not match the type's shape");
    }
  }
  return cur;
}

export function typePaths(node: ATypeNode, root: string): Array<[string, ATypeNode]> {
  const out: Array<[string, ATypeNode]> = [];
  const walk = (n: ATypeNode, path: string): void => {
    out.push([path, n]);
    const raw = n.t;
    if (typeof raw === "object") {
      if ("rec" in raw) {
        for (const [name, child] of Object.entries(raw.rec)) walk(child, `${path}.${name}`);
      } else {
        walk(raw.bag, `${path}.elem`);
      }
    }
  };
  walk(node, root);
  return out;
}

/** Context-type paths whose annotations intersect the selected node's. */
export function staticSlice(
  actx: Record<string, ATypeNode>,
  result: ATypeNode,
  at: string,
): string[] {
  const path = parseTypePath(at);
  if (path.root !== OUTPUT_ROOT) {
    throw new Error(`output type paths are rooted at ${JSON.stringify(OUTPUT_ROOT)}`);
  }
  const wanted = annOf(resolveType(result, path));
  const hits: string[] = [];
  for (const [name, t] of Object.entries(actx)) {
    for (const [p, n] of typePaths(t, name)) {
      if (intersects(annOf(n), wanted)) hits.push(p);
    }
  }
  return hits.sort();
}
