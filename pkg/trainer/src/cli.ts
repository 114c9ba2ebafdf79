/** Command line: train a checkpoint, or decode predictions for the evaluator. */

import * as fs from 'fs';
import * as path from 'path';
import { readExamples } from './data';
import { DEFAULTS, TrainerConfig, loadCheckpoint, predict, saveCheckpoint, train } from './train';

function parseFlags(argv: string[]): Map<string, string> {
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (!key.startsWith('--') || value === undefined) {
      throw new UsageError(`bad argument pair near ${key}`);
    }
    flags.set(key.slice(2), value);
  }
  return flags;
}

class UsageError extends Error {}

function need(flags: Map<string, string>, name: string): string {
  const value = flags.get(name);
  if (value === undefined) throw new UsageError(`--${name} is required`);
  return value;
}

function num(flags: Map<string, string>, name: string, fallback: number): number {
  const raw = flags.get(name);
  if (raw === undefined) return fallback;
  const value = Number(raw);
  if (!Number.isFinite(value)) throw new UsageError(`--${name} must be a number`);
  return value;
}

function cmdTrain(argv: string[]): number {
  const flags = parseFlags(argv);
  const cfg: TrainerConfig = {
    dataset: need(flags, 'dataset'),
    embed: num(flags, 'embed', DEFAULTS.embed),
    hidden: num(flags, 'hidden', DEFAULTS.hidden),
    layers: num(flags, 'layers', DEFAULTS.layers),
    dropout: num(flags, 'dropout', DEFAULTS.dropout),
    lr: num(flags, 'lr', DEFAULTS.lr),
    batch: num(flags, 'batch', DEFAULTS.batch),
    epochs: num(flags, 'epochs', DEFAULTS.epochs),
    seed: num(flags, 'seed', DEFAULTS.seed),
    clip: num(flags, 'clip', DEFAULTS.clip),
    maxDecodeLen: num(flags, 'max-len', DEFAULTS.maxDecodeLen),
    lrDecay: num(flags, 'lr-decay', DEFAULTS.lrDecay),
    lrDecayAfter: num(flags, 'lr-decay-after', DEFAULTS.lrDecayAfter),
  };
  const out = need(flags, 'out');
  const logPath = flags.get('log');
  const initFrom = flags.get('init-from');
  const logLines: string[] = [];
  const result = train(cfg, (entry) => {
    const line = `epoch ${entry.epoch} loss ${entry.loss.toFixed(4)} (${entry.seconds.toFixed(1)}s)`;
    console.log(line);
    logLines.push(line);
  }, undefined, initFrom);
  saveCheckpoint(out, result, cfg);
  if (logPath) fs.writeFileSync(logPath, logLines.join('\n') + '\n');
  console.log(`saved checkpoint to ${out} (direction ${result.direction})`);
  return 0;
}

function cmdPredict(argv: string[]): number {
  const flags = parseFlags(argv);
  const modelPath = need(flags, 'model');
  const dataset = need(flags, 'dataset');
  const out = need(flags, 'out');
  const { model, cfg } = loadCheckpoint(modelPath);
  const maxLen = num(flags, 'max-len', cfg.maxDecodeLen);
  const examples = readExamples(path.join(dataset, 'test.txt'));
  const predictions = predict(model, examples, maxLen);
  fs.writeFileSync(out, predictions.map((tokens) => tokens.join(' ')).join('\n') + '\n');
  console.log(`wrote ${predictions.length} predictions to ${out}`);
  return 0;
}

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  try {
    if (command === 'train') return cmdTrain(rest);
    if (command === 'predict') return cmdPredict(rest);
    throw new UsageError('usage: cli.js <train|predict> --flags...');
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(`usage error: ${err.message}`);
      return 2;
    }
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
