/** Bundle parsing and validation. */

import { BUNDLE_SCHEMA, SliceBundle } from "./types.js";

export class BundleError extends Error {}

/** Parse and validate bundle JSON text; throws BundleError with a message fit for a banner. */
export function parseBundle(text: string): SliceBundle {
  let data: unknown;
  try {
    data = JSON.parse(text);
  } catch (e) {
    throw new BundleError(`not valid JSON: ${(e as Error).message}`);
  }
  if (typeof data !== "object" || data === null) {
    throw new BundleError("bundle must be a JSON object");
  }
  const bundle = data as Partial<SliceBundle>;
  if (bundle.schema !== BUNDLE_SCHEMA) {
    throw new BundleError(
      `unsupported bundle schema ${JSON.stringify(bundle.schema)}; expected "${BUNDLE_SCHEMA}"`,
    );
  }
  for (const key of ["query", "core", "type", "env", "output", "colors"] as const) {
    if (!(key in bundle)) throw new BundleError(`bundle is missing the "${key}" field`);
  }
  return bundle as SliceBundle;
}
