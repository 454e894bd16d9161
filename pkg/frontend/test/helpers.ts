import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { parseBundle } from "../src/bundle.js";
import { SliceBundle } from "../src/types.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "..", "fixtures");

export interface SliceCheck {
  kind: "backward" | "forward";
  at?: string;
  color?: string;
  deep?: boolean;
  expected: string[];
}

export interface StaticCheck {
  at: string;
  expected: string[];
}

export interface ManifestEntry {
  bundle: string;
  checks: SliceCheck[];
  static_checks: StaticCheck[];
}

export function loadManifest(): Record<string, ManifestEntry> {
  return JSON.parse(readFileSync(join(FIXTURES, "slices.json"), "utf8"));
}

export function loadBundle(file: string): SliceBundle {
  return parseBundle(readFileSync(join(FIXTURES, file), "utf8"));
}

export function loadBundleText(file: string): string {
  return readFileSync(join(FIXTURES, file), "utf8");
}
