// Renders the server's fully parenthesized formula text as nested clickable
// spans, each carrying the path of the subformula it covers. The full-paren
// form makes the structure recoverable by bracket matching alone, so no
// precedence logic lives in the client.

export type SpanNode = {
  path: number[];
  text: string;
  kind: "binary" | "not" | "leaf";
  op?: string;
  children: SpanNode[];
};

const BINARY_OPS = new Set(["∧", "∨", "→", "↔"]);
const NOT = "¬";

class Reader {
  pos = 0;

  constructor(readonly text: string) {}

  peek(): string {
    return this.text[this.pos] ?? "";
  }

  take(): string {
    const c = this.peek();
    this.pos += 1;
    return c;
  }

  skipSpaces(): void {
    while (this.peek() === " ") this.pos += 1;
  }

  readNode(path: number[]): SpanNode {
    const c = this.peek();
    if (c === "(") {
      const start = this.pos;
      this.take();
      const left = this.readNode([...path, 0]);
      this.skipSpaces();
      const op = this.take();
      if (!BINARY_OPS.has(op)) {
        throw new Error(`expected a connective at ${this.pos - 1}, found '${op}'`);
      }
      this.skipSpaces();
      const right = this.readNode([...path, 1]);
      if (this.take() !== ")") {
        throw new Error(`expected ')' at ${this.pos - 1}`);
      }
      return { path, text: this.text.slice(start, this.pos), kind: "binary", op, children: [left, right] };
    }
    if (c === NOT) {
      const start = this.pos;
      this.take();
      const child = this.readNode([...path, 0]);
      return { path, text: this.text.slice(start, this.pos), kind: "not", children: [child] };
    }
    const start = this.pos;
    while (/[A-Za-z0-9_]/.test(this.peek())) this.take();
    if (this.pos === start) {
      throw new Error(`expected an atom or constant at ${this.pos}`);
    }
    return { path, text: this.text.slice(start, this.pos), kind: "leaf", children: [] };
  }
}

export function parseFullRendering(full: string): SpanNode {
  const reader = new Reader(full.trim());
  const node = reader.readNode([]);
  if (reader.pos !== reader.text.length) {
    throw new Error(`trailing text at ${reader.pos} in ${JSON.stringify(full)}`);
  }
  return node;
}

export function pathKey(path: number[]): string {
  return path.join(".");
}

export function buildFormulaElement(doc: Document, node: SpanNode): HTMLElement {
  const span = doc.createElement("span");
  span.className = "node";
  span.dataset.path = pathKey(node.path);
  if (node.kind === "binary") {
    const [left, right] = node.children;
    span.append("(", buildFormulaElement(doc, left!), ` ${node.op} `, buildFormulaElement(doc, right!), ")");
  } else if (node.kind === "not") {
    span.append(NOT, buildFormulaElement(doc, node.children[0]!));
  } else {
    span.textContent = node.text;
  }
  return span;
}
