/** Training loop: per-sentence Adam steps in fixed corpus order. */
import * as tf from "@tensorflow/tfjs";

import { CorpusSentence } from "./corpus";
import { BiLM, BiLMConfig, DEFAULT_CONFIG } from "./model";
import { Vocabulary } from "./vocab";

export interface TrainResult {
  model: BiLM;
  epochLosses: number[];
}

export function trainModel(
  sentences: CorpusSentence[],
  config: Partial<BiLMConfig> = {},
  onEpoch?: (epoch: number, loss: number) => void
): TrainResult {
  if (sentences.length === 0) {
    throw new Error("training corpus is empty");
  }
  const cfg: BiLMConfig = { ...DEFAULT_CONFIG, ...config };
  const vocab = Vocabulary.fromSentences(sentences);
  const model = new BiLM(vocab, cfg);
  const optimizer = tf.train.adam(cfg.learningRate);
  const encoded = sentences.map((s) => vocab.encodePadded(s.tokens));

  const epochLosses: number[] = [];
  for (let epoch = 0; epoch < cfg.epochs; epoch++) {
    let total = 0;
    for (const padded of encoded) {
      const cost = optimizer.minimize(() => model.loss(padded), true, model.variables());
      total += cost!.dataSync()[0];
      cost!.dispose();
    }
    const mean = total / encoded.length;
    epochLosses.push(mean);
    onEpoch?.(epoch + 1, mean);
  }
  optimizer.dispose();
  return { model, epochLosses };
}
