/** DOM wiring for the slice explorer page. */

import { BundleError, parseBundle } from "./bundle.js";
import { applyHighlights, escapeHtml, renderEnv, renderType, renderTypeContext, renderValue } from "./render.js";
import { BundleView } from "./view.js";

let view: BundleView | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function banner(message: string | null): void {
  const box = el<HTMLDivElement>("banner");
  box.textContent = message ?? "";
  box.style.display = message ? "block" : "none";
}

function refresh(): void {
  if (!view) return;
  const inputPane = el<HTMLDivElement>("input-pane");
  const outputPane = el<HTMLDivElement>("output-pane");
  if (view.mode === "dynamic") {
    applyHighlights(inputPane, view.inputHighlights);
    applyHighlights(outputPane, view.outputHighlights);
  } else {
    applyHighlights(inputPane, view.typeHighlights, "data-tpath");
    applyHighlights(outputPane, new Set(), "data-tpath");
  }
  const colors = view.statusColors;
  el<HTMLDivElement>("status").textContent =
    view.selected.kind === "none"
      ? "click an output cell for its backward slice, an input cell for its forward slice"
      : `${view.selected.kind} ${"path" in view.selected ? view.selected.path : ""} — colors: ${
          colors.length ? colors.join(", ") : "(none)"
        }`;
}

function renderAll(): void {
  if (!view) return;
  const b = view.bundle;
  el<HTMLPreElement>("query").textContent = b.query.trim();
  el<HTMLDivElement>("meta").innerHTML =
    `type: <code>${escapeHtml(b.type)}</code>` +
    (b.atype ? ` &nbsp; a-type: <code>${escapeHtml(b.atype)}</code>` : "");
  if (view.mode === "dynamic") {
    el<HTMLDivElement>("input-pane").innerHTML = renderEnv(b.env);
    el<HTMLDivElement>("output-pane").innerHTML = renderValue(b.output, "result");
  } else if (b.actx && b.atype_json) {
    el<HTMLDivElement>("input-pane").innerHTML = renderTypeContext(b.actx);
    el<HTMLDivElement>("output-pane").innerHTML = renderType(b.atype_json, "result");
  } else {
    el<HTMLDivElement>("input-pane").innerHTML = "<p>(no analysis stored in this bundle)</p>";
    el<HTMLDivElement>("output-pane").innerHTML = "";
  }
  refresh();
}

function pathOfEvent(event: Event, attribute: string): string | null {
  const target = event.target as Element | null;
  const holder = target?.closest(`[${attribute}]`);
  return holder?.getAttribute(attribute) ?? null;
}

function wire(): void {
  el<HTMLInputElement>("file").addEventListener("change", async (event) => {
    const input = event.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    try {
      view = new BundleView(parseBundle(await file.text()));
      banner(null);
      renderAll();
    } catch (e) {
      view = null;
      banner(e instanceof BundleError ? `cannot load bundle: ${e.message}` : String(e));
    }
  });

  el<HTMLDivElement>("output-pane").addEventListener("click", (event) => {
    if (!view) return; // no bundle loaded: no-op
    if (view.mode === "dynamic") {
      const path = pathOfEvent(event, "data-path");
      if (path) view.selectOutput(path);
    } else {
      const path = pathOfEvent(event, "data-tpath");
      if (path) view.selectOutputType(path);
    }
    refresh();
  });

  el<HTMLDivElement>("input-pane").addEventListener("click", (event) => {
    if (!view || view.mode !== "dynamic") return;
    const path = pathOfEvent(event, "data-path");
    if (path) view.selectInput(path);
    refresh();
  });

  el<HTMLInputElement>("deep").addEventListener("change", (event) => {
    if (!view) return;
    view.deep = (event.target as HTMLInputElement).checked;
    refresh();
  });

  el<HTMLSelectElement>("mode").addEventListener("change", (event) => {
    if (!view) return;
    view.mode = (event.target as HTMLSelectElement).value === "static" ? "static" : "dynamic";
    view.clearSelection();
    renderAll();
  });
}

document.addEventListener("DOMContentLoaded", wire);
