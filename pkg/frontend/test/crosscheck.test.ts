/**
 * Client-side slice computation must agree with the CLI byte for byte on
 * every shipped fixture. The expected arrays were recorded from
 * `nrcprov slice ... --json` (and the engine's static_slice for static
 * mode) by scripts/make_fixtures.py.
 */

import { describe, expect, it } from "vitest";

import { backwardSlice, forwardSlice, staticSlice } from "../src/slicing.js";
import { loadBundle, loadManifest } from "./helpers.js";

const manifest = loadManifest();

describe.each(Object.entries(manifest))("bundle %s", (_name, entry) => {
  const bundle = loadBundle(entry.bundle);

  it("matches the CLI on every dynamic slice", () => {
    for (const check of entry.checks) {
      const got =
        check.kind === "backward"
          ? backwardSlice(bundle.env, bundle.output, check.at!, check.deep ?? false)
          : forwardSlice(bundle.output, check.color!);
      expect(JSON.stringify(got), JSON.stringify(check)).toBe(JSON.stringify(check.expected));
    }
  });

  it("matches the engine on every static slice", () => {
    for (const check of entry.static_checks) {
      const got = staticSlice(bundle.actx!, bundle.atype_json!, check.at);
      expect(JSON.stringify(got), check.at).toBe(JSON.stringify(check.expected));
    }
  });
});
