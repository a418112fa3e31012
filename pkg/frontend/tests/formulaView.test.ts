import { describe, expect, it } from "vitest";

import { parseFullRendering, pathKey } from "../src/formulaView.js";

describe("parseFullRendering", () => {
  it("recovers paths from a fully parenthesized rendering", () => {
    const tree = parseFullRendering("(A ∨ (¬B ∧ C))");
    expect(tree.kind).toBe("binary");
    expect(tree.op).toBe("∨");
    const [left, right] = tree.children;
    expect(left?.text).toBe("A");
    expect(pathKey(left!.path)).toBe("0");
    expect(right?.op).toBe("∧");
    const [notB, c] = right!.children;
    expect(notB?.kind).toBe("not");
    expect(pathKey(notB!.path)).toBe("1.0");
    expect(notB?.children[0]?.text).toBe("B");
    expect(pathKey(notB!.children[0]!.path)).toBe("1.0.0");
    expect(c?.text).toBe("C");
  });

  it("handles nested negation and constants", () => {
    const tree = parseFullRendering("¬¬T");
    expect(tree.kind).toBe("not");
    expect(tree.children[0]?.kind).toBe("not");
    expect(tree.children[0]?.children[0]?.text).toBe("T");
  });

  it("handles multi-character atoms", () => {
    const tree = parseFullRendering("(x1 → y_2)");
    expect(tree.children[0]?.text).toBe("x1");
    expect(tree.children[1]?.text).toBe("y_2");
  });

  it("rejects trailing garbage", () => {
    expect(() => parseFullRendering("(P ∧ Q) junk")).toThrow();
  });
});
