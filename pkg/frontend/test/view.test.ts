import { describe, expect, it } from "vitest";

import { BundleView } from "../src/view.js";
import { loadBundle } from "./helpers.js";

describe("selecting output nodes", () => {
  it("highlights all six compared cells for the selection query's result bag", () => {
    const view = new BundleView(loadBundle("sigmaAB.bundle.json"));
    view.selectOutput("result");
    expect([...view.inputHighlights].sort()).toEqual([
      "R[0].A",
      "R[0].B",
      "R[1].A",
      "R[1].B",
      "R[2].A",
      "R[2].B",
    ]);
    expect(view.statusColors).toEqual(["a1", "a2", "a3", "b1", "b2", "b3"]);
  });

  it("highlights nothing for the count query's unannotated output", () => {
    const view = new BundleView(loadBundle("count.bundle.json"));
    view.selectOutput("result");
    expect(view.inputHighlights.size).toBe(0);
    expect(view.statusColors).toEqual([]);
  });

  it("highlights nothing for an unannotated record node", () => {
    const view = new BundleView(loadBundle("piA.bundle.json"));
    view.selectOutput("result[0]"); // projection rows carry empty annotations
    expect(view.inputHighlights.size).toBe(0);
  });

  it("respects the deep toggle", () => {
    const view = new BundleView(loadBundle("piA.bundle.json"));
    view.selectOutput("result");
    expect(view.inputHighlights.size).toBe(0);
    view.deep = true;
    expect([...view.inputHighlights].sort()).toEqual(["R[0].A", "R[1].A", "R[2].A"]);
  });
});

describe("selecting input cells", () => {
  it("shows the forward slice of the cell's color", () => {
    const view = new BundleView(loadBundle("piA.bundle.json"));
    view.selectInput("R[0].A");
    expect([...view.outputHighlights]).toEqual(["result[0].A"]);
  });

  it("shows nothing for a cell the query never inspects", () => {
    const view = new BundleView(loadBundle("piA.bundle.json"));
    view.selectInput("S[0].C");
    expect(view.outputHighlights.size).toBe(0);
  });

  it("unions the colors of a multi-colored selection", () => {
    const view = new BundleView(loadBundle("xminusx.bundle.json"));
    view.selectInput("x"); // the bag node; output root carries both colors
    expect([...view.outputHighlights]).toEqual(["result"]);
  });
});

describe("highlight invariant", () => {
  it("recomputes highlights when the selection changes", () => {
    const view = new BundleView(loadBundle("sigmaAB.bundle.json"));
    view.selectOutput("result[0].A");
    expect([...view.inputHighlights]).toEqual(["R[0].A"]);
    view.selectOutput("result[0].B");
    expect([...view.inputHighlights]).toEqual(["R[0].B"]);
    view.clearSelection();
    expect(view.inputHighlights.size).toBe(0);
  });

  it("keeps output highlights empty while an output node is selected", () => {
    const view = new BundleView(loadBundle("sigmaAB.bundle.json"));
    view.selectOutput("result");
    expect(view.outputHighlights.size).toBe(0);
  });
});

describe("static mode", () => {
  it("maps the difference query's result type onto four context columns", () => {
    const view = new BundleView(loadBundle("diff-rename.bundle.json"));
    view.mode = "static";
    view.selectOutputType("result");
    expect([...view.typeHighlights].sort()).toEqual([
      "R.elem.A",
      "R.elem.B",
      "S.elem.D",
      "S.elem.E",
    ]);
  });

  it("highlights nothing for count's clean type", () => {
    const view = new BundleView(loadBundle("count.bundle.json"));
    view.mode = "static";
    view.selectOutputType("result");
    expect(view.typeHighlights.size).toBe(0);
  });
});
