/** Reading the line-oriented dataset format and preparing batches. */

import * as fs from 'fs';
import * as path from 'path';
import { Rng } from './rng';

export interface Example {
  src: string[];
  tgt: string[];
}

export function parseLine(line: string, file: string, lineNumber: number): Example {
  if (!line.startsWith('IN: ')) {
    throw new Error(`${file}:${lineNumber}: line must start with 'IN: '`);
  }
  const sep = line.indexOf(' OUT: ');
  if (sep < 0) {
    throw new Error(`${file}:${lineNumber}: line is missing ' OUT: '`);
  }
  const src = line.slice(4, sep).split(' ').filter((t) => t.length > 0);
  const tgt = line.slice(sep + 6).split(' ').filter((t) => t.length > 0);
  if (src.length === 0 || tgt.length === 0) {
    throw new Error(`${file}:${lineNumber}: empty source or target`);
  }
  return { src, tgt };
}

export function readExamples(file: string): Example[] {
  const text = fs.readFileSync(file, 'utf8');
  const lines = text.split('\n');
  if (lines[lines.length - 1] === '') lines.pop();
  return lines.map((line, i) => parseLine(line, file, i + 1));
}

export function readDirection(datasetDir: string): string {
  const manifest = JSON.parse(
    fs.readFileSync(path.join(datasetDir, 'manifest.json'), 'utf8'),
  ) as { direction?: string };
  return manifest.direction ?? 'unknown';
}

export const BOS = '<bos>';
export const EOS = '<eos>';

export interface Vocab {
  tokens: string[];
  index: Map<string, number>;
}

export function buildVocab(sequences: string[][], specials: string[] = []): Vocab {
  const seen = new Set<string>();
  for (const seq of sequences) for (const tok of seq) seen.add(tok);
  const tokens = [...specials, ...[...seen].sort()];
  const index = new Map(tokens.map((t, i) => [t, i]));
  return { tokens, index };
}

export function encode(vocab: Vocab, tokens: string[]): Int32Array {
  const out = new Int32Array(tokens.length);
  for (let i = 0; i < tokens.length; i++) {
    // Unseen tokens map to id 0; the vocabularies here are closed, so this
    // only matters for deliberately corrupted inputs.
    out[i] = vocab.index.get(tokens[i]) ?? 0;
  }
  return out;
}

export interface Batch {
  size: number;
  srcLen: number;
  tgtLen: number; // 0 when targets are absent (decode-only batches)
  src: Int32Array; // size × srcLen
  tgt: Int32Array; // size × tgtLen
  rows: number[]; // original example indices, for order restoration
}

/**
 * Group examples by exact (srcLen, tgtLen) so batches need no padding, then
 * chop each group into batches of at most batchSize.
 */
export function makeBatches(
  examples: Example[],
  srcVocab: Vocab,
  tgtVocab: Vocab,
  batchSize: number,
  rng?: Rng,
): Batch[] {
  const groups = new Map<string, number[]>();
  examples.forEach((ex, i) => {
    const key = `${ex.src.length}:${ex.tgt.length}`;
    const group = groups.get(key);
    if (group) group.push(i);
    else groups.set(key, [i]);
  });
  const batches: Batch[] = [];
  for (const rows of groups.values()) {
    if (rng) rng.shuffle(rows);
    for (let start = 0; start < rows.length; start += batchSize) {
      const chunk = rows.slice(start, start + batchSize);
      const srcLen = examples[chunk[0]].src.length;
      const tgtLen = examples[chunk[0]].tgt.length;
      const src = new Int32Array(chunk.length * srcLen);
      const tgt = new Int32Array(chunk.length * tgtLen);
      chunk.forEach((row, b) => {
        src.set(encode(srcVocab, examples[row].src), b * srcLen);
        tgt.set(encode(tgtVocab, examples[row].tgt), b * tgtLen);
      });
      batches.push({ size: chunk.length, srcLen, tgtLen, src, tgt, rows: chunk });
    }
  }
  if (rng) rng.shuffle(batches);
  return batches;
}
