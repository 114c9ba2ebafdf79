/** Training loop, greedy prediction, and checkpoint files. */

import * as fs from 'fs';
import * as path from 'path';
import { Adam } from './adam';
import { BOS, EOS, Example, Vocab, buildVocab, makeBatches, readDirection, readExamples } from './data';
import { Seq2SeqAttn, Tensor } from './model';
import { Rng } from './rng';

export interface TrainerConfig {
  dataset: string;
  embed: number;
  hidden: number;
  layers: number;
  dropout: number;
  lr: number;
  batch: number;
  epochs: number;
  seed: number;
  clip: number;
  maxDecodeLen: number; // hard cap so decoding always terminates
  lrDecay: number; // per-epoch multiplier applied after lrDecayAfter epochs
  lrDecayAfter: number;
}

export const DEFAULTS = {
  embed: 32,
  hidden: 100,
  layers: 1,
  dropout: 0,
  lr: 2e-3,
  batch: 64,
  epochs: 12,
  seed: 1,
  clip: 5,
  maxDecodeLen: 64,
  lrDecay: 1,
  lrDecayAfter: 0,
};

export interface EpochLog {
  epoch: number;
  loss: number;
  seconds: number;
}

export interface TrainResult {
  model: Seq2SeqAttn;
  log: EpochLog[];
  direction: string;
  srcVocab: Vocab;
  tgtVocab: Vocab;
}

function vocabOf(model: Seq2SeqAttn, side: 'src' | 'tgt'): Vocab {
  const tokens = side === 'src' ? model.srcTokens : model.tgtTokens;
  return { tokens, index: new Map(tokens.map((t, i) => [t, i])) };
}

/**
 * Trains on {dataset}/train.txt only; the test side is never opened here.
 * Passing initFrom resumes from an existing checkpoint's weights.
 */
export function train(
  cfg: TrainerConfig,
  onEpoch?: (log: EpochLog) => void,
  examplesOverride?: Example[],
  initFrom?: string,
): TrainResult {
  const examples = examplesOverride ?? readExamples(path.join(cfg.dataset, 'train.txt'));
  const direction = fs.existsSync(path.join(cfg.dataset, 'manifest.json'))
    ? readDirection(cfg.dataset)
    : 'unknown';
  const srcVocab = buildVocab(examples.map((e) => e.src));
  const tgtVocab = buildVocab(examples.map((e) => e.tgt), [BOS, EOS]);
  const rng = new Rng(cfg.seed);
  let model: Seq2SeqAttn;
  if (initFrom) {
    model = loadCheckpoint(initFrom).model;
    const sameVocab =
      model.srcTokens.join(' ') === srcVocab.tokens.join(' ') &&
      model.tgtTokens.join(' ') === tgtVocab.tokens.join(' ');
    if (!sameVocab) throw new Error(`checkpoint ${initFrom} was trained on a different vocabulary`);
  } else {
    model = new Seq2SeqAttn(
      { embed: cfg.embed, hidden: cfg.hidden, layers: cfg.layers, dropout: cfg.dropout },
      srcVocab.tokens,
      tgtVocab.tokens,
    );
    model.init(rng);
  }
  const adam = new Adam(model.params(), cfg.lr);
  const log: EpochLog[] = [];
  let lr = cfg.lr;
  for (let epoch = 1; epoch <= cfg.epochs; epoch++) {
    if (epoch > 1 && epoch > cfg.lrDecayAfter) lr *= cfg.lrDecay;
    adam.setLr(lr);
    const started = Date.now();
    const batches = makeBatches(examples, srcVocab, tgtVocab, cfg.batch, rng);
    let lossSum = 0;
    let tokens = 0;
    for (const batch of batches) {
      const result = model.trainBatch(batch, rng);
      lossSum += result.lossSum;
      tokens += result.tokens;
      adam.step(cfg.clip);
    }
    const entry = { epoch, loss: lossSum / tokens, seconds: (Date.now() - started) / 1000 };
    log.push(entry);
    if (onEpoch) onEpoch(entry);
  }
  return { model, log, direction, srcVocab, tgtVocab };
}

/** Greedy predictions in the original example order. */
export function predict(model: Seq2SeqAttn, examples: Example[], maxDecodeLen: number): string[][] {
  const srcVocab = vocabOf(model, 'src');
  const tgtVocab = vocabOf(model, 'tgt');
  const out: string[][] = new Array(examples.length);
  for (const batch of makeBatches(examples, srcVocab, tgtVocab, 128)) {
    const decoded = model.decodeBatch(batch.src, batch.size, batch.srcLen, maxDecodeLen);
    decoded.forEach((ids, b) => {
      out[batch.rows[b]] = ids.map((id) => tgtVocab.tokens[id]);
    });
  }
  return out;
}

export function sequenceAccuracy(model: Seq2SeqAttn, examples: Example[], maxDecodeLen = 64): number {
  const preds = predict(model, examples, maxDecodeLen);
  let correct = 0;
  for (let i = 0; i < examples.length; i++) {
    const want = examples[i].tgt;
    const got = preds[i];
    if (got.length === want.length && got.every((t, j) => t === want[j])) correct++;
  }
  return correct / examples.length;
}

interface CheckpointJson {
  format: string;
  direction: string;
  shape: { embed: number; hidden: number; layers: number; dropout: number };
  config: Omit<TrainerConfig, 'dataset'> & { dataset?: string };
  srcTokens: string[];
  tgtTokens: string[];
  params: Record<string, string>;
  log: EpochLog[];
}

function encodeWeights(t: Tensor): string {
  return Buffer.from(t.w.buffer, t.w.byteOffset, t.w.byteLength).toString('base64');
}

function decodeWeights(encoded: string, into: Float64Array): void {
  const bytes = Buffer.from(encoded, 'base64');
  if (bytes.length !== into.byteLength) {
    throw new Error(`checkpoint tensor has ${bytes.length} bytes, expected ${into.byteLength}`);
  }
  new Uint8Array(into.buffer, into.byteOffset, into.byteLength).set(bytes);
}

export function saveCheckpoint(file: string, result: TrainResult, cfg: TrainerConfig): void {
  const params: Record<string, string> = {};
  for (const p of result.model.params()) params[p.name] = encodeWeights(p);
  const data: CheckpointJson = {
    format: 'scan-nacs-trainer/1',
    direction: result.direction,
    shape: result.model.shape,
    config: cfg,
    srcTokens: result.model.srcTokens,
    tgtTokens: result.model.tgtTokens,
    params,
    log: result.log,
  };
  fs.writeFileSync(file, JSON.stringify(data));
}

export function loadCheckpoint(file: string): { model: Seq2SeqAttn; cfg: TrainerConfig; direction: string } {
  const data = JSON.parse(fs.readFileSync(file, 'utf8')) as CheckpointJson;
  if (data.format !== 'scan-nacs-trainer/1') {
    throw new Error(`unrecognized checkpoint format in ${file}`);
  }
  const cfg = { ...DEFAULTS, ...data.config, dataset: data.config.dataset ?? '' };
  const shape = data.shape ?? {
    embed: cfg.embed,
    hidden: cfg.hidden,
    layers: cfg.layers,
    dropout: cfg.dropout,
  };
  const model = new Seq2SeqAttn(shape, data.srcTokens, data.tgtTokens);
  for (const p of model.params()) {
    const encoded = data.params[p.name];
    if (!encoded) throw new Error(`checkpoint is missing tensor ${p.name}`);
    decodeWeights(encoded, p.w);
  }
  return { model, cfg, direction: data.direction };
}
