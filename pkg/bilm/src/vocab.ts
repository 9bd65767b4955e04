/** Token vocabulary with sentence boundary markers and unknown-token fallback. */
import { CorpusSentence } from "./corpus";

export const BOS = "<s>";
export const EOS = "</s>";
export const UNK = "<unk>";

export class Vocabulary {
  readonly tokens: string[];
  private readonly index: Map<string, number>;

  constructor(tokens: string[]) {
    this.tokens = tokens;
    this.index = new Map(tokens.map((t, i) => [t, i]));
  }

  /** Deterministic build: specials first, then corpus tokens by descending
   * frequency with lexicographic tie-break. */
  static fromSentences(sentences: CorpusSentence[]): Vocabulary {
    const counts = new Map<string, number>();
    for (const s of sentences) {
      for (const t of s.tokens) {
        counts.set(t, (counts.get(t) ?? 0) + 1);
      }
    }
    if (counts.size === 0) {
      throw new Error("cannot build a vocabulary from an empty corpus");
    }
    const sorted = [...counts.entries()]
      .sort((a, b) => b[1] - a[1] || (a[0] < b[0] ? -1 : 1))
      .map(([t]) => t);
    return new Vocabulary([BOS, EOS, UNK, ...sorted]);
  }

  get size(): number {
    return this.tokens.length;
  }

  id(token: string): number {
    return this.index.get(token) ?? this.index.get(UNK)!;
  }

  /** Token ids padded with BOS/EOS so every real position has both neighbors. */
  encodePadded(tokens: string[]): number[] {
    return [this.id(BOS), ...tokens.map((t) => this.id(t)), this.id(EOS)];
  }
}
