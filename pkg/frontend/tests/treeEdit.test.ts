import { describe, expect, it } from "vitest";
import {
  addChild,
  deleteNode,
  findNode,
  isLeaf,
  listLeaves,
  listNames,
  moveNode,
  renameNode,
  type TreeJson,
} from "../src/treeEdit.js";

const sample: TreeJson = {
  name: "Plans",
  children: [
    { name: "Standard", children: [{ name: "p1" }, { name: "p2" }] },
    { name: "Special", children: [{ name: "v" }] },
  ],
};

describe("queries", () => {
  it("lists names in preorder", () => {
    expect(listNames(sample)).toEqual(["Plans", "Standard", "p1", "p2", "Special", "v"]);
  });

  it("lists leaves only", () => {
    expect(listLeaves(sample)).toEqual(["p1", "p2", "v"]);
  });

  it("distinguishes leaves from internal nodes", () => {
    expect(isLeaf(findNode(sample, "p1")!)).toBe(true);
    expect(isLeaf(findNode(sample, "Standard")!)).toBe(false);
  });
});

describe("addChild", () => {
  it("adds a new leaf without mutating the input", () => {
    const next = addChild(sample, "Special", "e");
    expect(listLeaves(next)).toContain("e");
    expect(listLeaves(sample)).not.toContain("e");
  });

  it("rejects duplicate names", () => {
    expect(() => addChild(sample, "Special", "p1")).toThrow(/duplicate/);
  });

  it("rejects invalid identifiers", () => {
    expect(() => addChild(sample, "Special", "2bad")).toThrow(/invalid/);
    expect(() => addChild(sample, "Special", "a-b")).toThrow(/invalid/);
  });

  it("rejects unknown parents", () => {
    expect(() => addChild(sample, "Nope", "x")).toThrow(/no node/);
  });
});

describe("renameNode", () => {
  it("renames in place", () => {
    const next = renameNode(sample, "Standard", "Basic");
    expect(findNode(next, "Basic")).not.toBeNull();
    expect(findNode(next, "Standard")).toBeNull();
    expect(listLeaves(next)).toEqual(["p1", "p2", "v"]);
  });

  it("rejects a rename that collides", () => {
    expect(() => renameNode(sample, "p1", "p2")).toThrow(/duplicate/);
  });
});

describe("deleteNode", () => {
  it("re-attaches children to the grandparent in place", () => {
    const next = deleteNode(sample, "Standard");
    expect(next.children!.map((c) => c.name)).toEqual(["p1", "p2", "Special"]);
  });

  it("removes a leaf outright", () => {
    const next = deleteNode(sample, "p2");
    expect(listLeaves(next)).toEqual(["p1", "v"]);
  });

  it("refuses to delete the root", () => {
    expect(() => deleteNode(sample, "Plans")).toThrow(/root/);
  });
});

describe("moveNode", () => {
  it("re-parents a subtree", () => {
    const next = moveNode(sample, "p2", "Special");
    expect(findNode(next, "Special")!.children!.map((c) => c.name)).toEqual(["v", "p2"]);
    expect(findNode(next, "Standard")!.children!.map((c) => c.name)).toEqual(["p1"]);
  });

  it("rejects moving a node under its own descendant", () => {
    expect(() => moveNode(sample, "Standard", "p1")).toThrow(/descendant/);
  });

  it("rejects moving the root", () => {
    expect(() => moveNode(sample, "Plans", "Special")).toThrow(/root/);
  });
});

describe("building the telephony tree from scratch", () => {
  it("reproduces the reference 11-leaf plan hierarchy via edits only", () => {
    let t: TreeJson = { name: "Plans" };
    t = addChild(t, "Plans", "Business");
    t = addChild(t, "Plans", "Special");
    t = addChild(t, "Plans", "Standard");
    t = addChild(t, "Business", "SB");
    t = addChild(t, "Business", "e");
    t = addChild(t, "SB", "b1");
    t = addChild(t, "SB", "b2");
    t = addChild(t, "Special", "F");
    t = addChild(t, "Special", "Y");
    t = addChild(t, "Special", "v");
    t = addChild(t, "F", "f1");
    t = addChild(t, "F", "f2");
    t = addChild(t, "Y", "y1");
    t = addChild(t, "Y", "y2");
    t = addChild(t, "Y", "y3");
    t = addChild(t, "Standard", "p1");
    t = addChild(t, "Standard", "p2");

    expect(listLeaves(t).sort()).toEqual(
      ["b1", "b2", "e", "f1", "f2", "p1", "p2", "v", "y1", "y2", "y3"].sort(),
    );
    expect(listNames(t)).toHaveLength(18);
    expect(findNode(t, "Business")!.children!.map((c) => c.name)).toEqual(["SB", "e"]);
  });
});
