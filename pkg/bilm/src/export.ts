/** Export per-token contextual vectors in the consumer's file format. */
import { CorpusSentence, VectorRecord } from "./corpus";
import { BiLM } from "./model";

export function exportVectors(model: BiLM, sentences: CorpusSentence[]): VectorRecord[] {
  return sentences.map((s) => {
    const vectors = model.tokenVectors(s.tokens);
    if (vectors.length !== s.tokens.length) {
      throw new Error(`sentence ${s.id}: vector count mismatch`);
    }
    for (const v of vectors) {
      if (v.length !== model.exportDim) {
        throw new Error(`sentence ${s.id}: vector dimension ${v.length} != ${model.exportDim}`);
      }
    }
    return { sentence_id: s.id, tokens: s.tokens, vectors };
  });
}
