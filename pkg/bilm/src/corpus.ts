/** Reading the corpus format and writing the contextual-vector format.
 *
 * Corpus lines are JSON records {example_id, source?, refs}; each ref is a
 * pre-tokenized sentence. Sentence ids follow the shared convention
 * `<example_id>#<ref_index>` so vector files line up with the consumer.
 */
import * as fs from "fs";

export interface CorpusSentence {
  id: string;
  tokens: string[];
}

export function parseCorpus(text: string): CorpusSentence[] {
  const sentences: CorpusSentence[] = [];
  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (!line) continue;
    let record: unknown;
    try {
      record = JSON.parse(line);
    } catch (e) {
      throw new Error(`line ${i + 1}: invalid JSON`);
    }
    const rec = record as { example_id?: unknown; refs?: unknown };
    if (typeof rec.example_id !== "string" || !Array.isArray(rec.refs) || rec.refs.length === 0) {
      throw new Error(`line ${i + 1}: record needs 'example_id' and non-empty 'refs'`);
    }
    rec.refs.forEach((ref, k) => {
      if (typeof ref !== "string") {
        throw new Error(`line ${i + 1}: ref ${k} is not a string`);
      }
      const tokens = ref.split(/\s+/).filter((t) => t.length > 0);
      if (tokens.length === 0) {
        throw new Error(`line ${i + 1}: ref ${k} is empty`);
      }
      sentences.push({ id: `${rec.example_id}#${k}`, tokens });
    });
  }
  return sentences;
}

export function loadCorpus(path: string): CorpusSentence[] {
  return parseCorpus(fs.readFileSync(path, "utf-8"));
}

export interface VectorRecord {
  sentence_id: string;
  tokens: string[];
  vectors: number[][];
}

export function writeVectorFile(path: string, records: VectorRecord[]): void {
  const lines = records.map((r) => JSON.stringify(r));
  fs.writeFileSync(path, lines.join("\n") + "\n", "utf-8");
}
