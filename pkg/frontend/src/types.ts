/** Wire types for slice bundles (schema "nrcprov/1"). */

/** Annotated value node: raw part plus a set of colors. */
export interface AValueNode {
  w: number | boolean | { rec: Record<string, AValueNode> } | { bag: AValueNode[] };
  ann?: string[];
}

/** Annotated type node: raw part plus a set of colors. */
export interface ATypeNode {
  t: "int" | "bool" | { rec: Record<string, ATypeNode> } | { bag: ATypeNode };
  ann?: string[];
}

export interface SliceBundle {
  schema: string;
  query: string;
  core: string;
  type: string;
  atype: string | null;
  atype_json?: ATypeNode | null;
  actx?: Record<string, ATypeNode> | null;
  env: Record<string, AValueNode>;
  output: AValueNode;
  colors: Record<string, string | null>;
  meta?: { tool?: string; version?: string };
}

export const BUNDLE_SCHEMA = "nrcprov/1";

export type ViewMode = "dynamic" | "static";

export function annOf(node: AValueNode | ATypeNode): ReadonlySet<string> {
  return new Set(node.ann ?? []);
}

export function isRecord(node: AValueNode): node is AValueNode & {
  w: { rec: Record<string, AValueNode> };
} {
  return typeof node.w === "object" && node.w !== null && "rec" in node.w;
}

export function isBag(node: AValueNode): node is AValueNode & { w: { bag: AValueNode[] } } {
  return typeof node.w === "object" && node.w !== null && "bag" in node.w;
}
