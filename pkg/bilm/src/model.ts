/** Bidirectional LSTM language model.
 *
 * A forward LSTM reads the sentence left to right and a backward LSTM right
 * to left; the token at position i is predicted from the forward state at
 * i-1 concatenated with the backward state at i+1, so a token never sees
 * itself. The exported representation of a token is the concatenation of the
 * forward and backward states at its own position (dimension 2H).
 */
import * as fs from "fs";
import * as path from "path";
import * as tf from "@tensorflow/tfjs";

import { Rng } from "./rng";
import { Vocabulary } from "./vocab";

export interface BiLMConfig {
  embeddingDim: number;
  hiddenDim: number;
  epochs: number;
  learningRate: number;
  seed: number;
}

export const DEFAULT_CONFIG: BiLMConfig = {
  embeddingDim: 300,
  hiddenDim: 64,
  epochs: 20,
  learningRate: 0.01,
  seed: 0,
};

interface LstmParams {
  kernel: tf.Variable<tf.Rank.R2>;
  bias: tf.Variable<tf.Rank.R1>;
}

export class BiLM {
  readonly vocab: Vocabulary;
  readonly config: BiLMConfig;
  readonly embedding: tf.Variable<tf.Rank.R2>;
  readonly fwd: LstmParams;
  readonly bwd: LstmParams;
  readonly outKernel: tf.Variable<tf.Rank.R2>;
  readonly outBias: tf.Variable<tf.Rank.R1>;

  private readonly named: [string, tf.Variable][] = [];

  constructor(vocab: Vocabulary, config: BiLMConfig, weights?: Map<string, Float32Array>) {
    this.vocab = vocab;
    this.config = config;
    const { embeddingDim: d, hiddenDim: h } = config;
    const v = vocab.size;
    const rng = new Rng(config.seed);

    // variable names are tracked here, not in the tf engine, which requires
    // globally unique names and would break loading a second model
    const init = (name: string, shape: number[], scale: number) => {
      const n = shape.reduce((a, b) => a * b, 1);
      const data = weights?.get(name) ?? rng.uniformArray(n, scale);
      const variable = tf.variable(tf.tensor(data, shape), true);
      this.named.push([name, variable]);
      return variable;
    };
    const glorot = (fanIn: number, fanOut: number) => Math.sqrt(6 / (fanIn + fanOut));

    this.embedding = init("embedding", [v, d], 0.1) as tf.Variable<tf.Rank.R2>;
    this.fwd = {
      kernel: init("fwd_kernel", [d + h, 4 * h], glorot(d + h, 4 * h)) as tf.Variable<tf.Rank.R2>,
      bias: init("fwd_bias", [4 * h], 0) as tf.Variable<tf.Rank.R1>,
    };
    this.bwd = {
      kernel: init("bwd_kernel", [d + h, 4 * h], glorot(d + h, 4 * h)) as tf.Variable<tf.Rank.R2>,
      bias: init("bwd_bias", [4 * h], 0) as tf.Variable<tf.Rank.R1>,
    };
    this.outKernel = init("out_kernel", [2 * h, v], glorot(2 * h, v)) as tf.Variable<tf.Rank.R2>;
    this.outBias = init("out_bias", [v], 0) as tf.Variable<tf.Rank.R1>;
  }

  get exportDim(): number {
    return 2 * this.config.hiddenDim;
  }

  private runLstm(params: LstmParams, inputs: tf.Tensor2D[]): tf.Tensor2D[] {
    const h0 = tf.zeros([1, this.config.hiddenDim]) as tf.Tensor2D;
    const c0 = tf.zeros([1, this.config.hiddenDim]) as tf.Tensor2D;
    let c = c0;
    let h = h0;
    const states: tf.Tensor2D[] = [];
    for (const x of inputs) {
      [c, h] = tf.basicLSTMCell(1.0, params.kernel, params.bias, x, c, h);
      states.push(h);
    }
    return states;
  }

  /** Forward and backward hidden states for every padded position. */
  states(paddedIds: number[]): { fwd: tf.Tensor2D[]; bwd: tf.Tensor2D[] } {
    const embedded = paddedIds.map(
      (id) => tf.gather(this.embedding, [id]) as tf.Tensor2D
    );
    const fwd = this.runLstm(this.fwd, embedded);
    const bwdRev = this.runLstm(this.bwd, [...embedded].reverse());
    const bwd = bwdRev.reverse();
    return { fwd, bwd };
  }

  /** Mean cross-entropy of predicting each real token from its neighbors. */
  loss(paddedIds: number[]): tf.Scalar {
    const { fwd, bwd } = this.states(paddedIds);
    const contexts: tf.Tensor2D[] = [];
    const targets: number[] = [];
    for (let p = 1; p < paddedIds.length - 1; p++) {
      contexts.push(tf.concat([fwd[p - 1], bwd[p + 1]], 1) as tf.Tensor2D);
      targets.push(paddedIds[p]);
    }
    const ctx = tf.concat(contexts, 0) as tf.Tensor2D;
    const logits = tf.add(tf.matMul(ctx, this.outKernel), this.outBias) as tf.Tensor2D;
    const labels = tf.oneHot(tf.tensor1d(targets, "int32"), this.vocab.size);
    return tf.losses.softmaxCrossEntropy(labels, logits) as tf.Scalar;
  }

  /** Per-token contextual vectors (forward state ++ backward state). */
  tokenVectors(tokens: string[]): number[][] {
    return tf.tidy(() => {
      const padded = this.vocab.encodePadded(tokens);
      const { fwd, bwd } = this.states(padded);
      const out: number[][] = [];
      for (let p = 1; p < padded.length - 1; p++) {
        const vec = tf.concat([fwd[p], bwd[p]], 1);
        out.push(Array.from(vec.dataSync()));
      }
      return out;
    });
  }

  variables(): tf.Variable[] {
    return this.named.map(([, v]) => v);
  }

  save(dir: string): void {
    fs.mkdirSync(dir, { recursive: true });
    const manifest = {
      config: this.config,
      vocab: this.vocab.tokens,
      weights: Object.fromEntries(
        this.named.map(([name, v]) => [name, Array.from(v.dataSync())])
      ),
    };
    fs.writeFileSync(path.join(dir, "model.json"), JSON.stringify(manifest), "utf-8");
  }

  static load(dir: string): BiLM {
    const manifest = JSON.parse(fs.readFileSync(path.join(dir, "model.json"), "utf-8"));
    const vocab = new Vocabulary(manifest.vocab);
    const weights = new Map<string, Float32Array>(
      Object.entries(manifest.weights).map(([name, data]) => [
        name,
        Float32Array.from(data as number[]),
      ])
    );
    return new BiLM(vocab, manifest.config, weights);
  }
}
