#!/usr/bin/env node
/** bilm-export: train a toy bidirectional LM and export contextual vectors.
 *
 *   bilm-export train  --corpus x.jsonl --out model/ [--embedding-dim N]
 *                      [--hidden-dim N] [--epochs N] [--lr F] [--seed N]
 *   bilm-export export --model model/ --corpus x.jsonl --out vectors.jsonl
 */
import { loadCorpus, writeVectorFile } from "./corpus";
import { exportVectors } from "./export";
import { BiLM } from "./model";
import { trainModel } from "./train";

function parseFlags(argv: string[]): Map<string, string> {
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (!key.startsWith("--") || value === undefined) {
      throw new UsageError(`expected "--flag value" pairs, got ${key}`);
    }
    flags.set(key.slice(2), value);
  }
  return flags;
}

class UsageError extends Error {}

function requireFlag(flags: Map<string, string>, name: string): string {
  const value = flags.get(name);
  if (value === undefined) {
    throw new UsageError(`missing required --${name}`);
  }
  return value;
}

function numFlag(flags: Map<string, string>, name: string): number | undefined {
  const raw = flags.get(name);
  if (raw === undefined) return undefined;
  const value = Number(raw);
  if (!Number.isFinite(value)) {
    throw new UsageError(`--${name} must be a number, got ${raw}`);
  }
  return value;
}

function main(argv: string[]): number {
  const [command, ...rest] = argv;
  if (command === "train") {
    const flags = parseFlags(rest);
    const corpus = loadCorpus(requireFlag(flags, "corpus"));
    const outDir = requireFlag(flags, "out");
    const overrides: Record<string, number> = {};
    const flagMap: Record<string, string> = {
      embeddingDim: "embedding-dim",
      hiddenDim: "hidden-dim",
      epochs: "epochs",
      learningRate: "lr",
      seed: "seed",
    };
    for (const [key, flag] of Object.entries(flagMap)) {
      const value = numFlag(flags, flag);
      if (value !== undefined) overrides[key] = value;
    }
    const { model, epochLosses } = trainModel(corpus, overrides, (epoch, loss) =>
      console.error(`epoch ${epoch}: loss ${loss.toFixed(4)}`)
    );
    model.save(outDir);
    console.error(`saved model to ${outDir} (final loss ${epochLosses.at(-1)!.toFixed(4)})`);
    return 0;
  }
  if (command === "export") {
    const flags = parseFlags(rest);
    const model = BiLM.load(requireFlag(flags, "model"));
    const corpus = loadCorpus(requireFlag(flags, "corpus"));
    const out = requireFlag(flags, "out");
    writeVectorFile(out, exportVectors(model, corpus));
    console.error(`wrote vectors for ${corpus.length} sentences to ${out}`);
    return 0;
  }
  throw new UsageError(`unknown command ${command ?? "(none)"}; use train or export`);
}

if (require.main === module) {
  try {
    process.exit(main(process.argv.slice(2)));
  } catch (e) {
    console.error(`bilm-export: error: ${(e as Error).message}`);
    process.exit(e instanceof UsageError ? 2 : 1);
  }
}

export { main };
