import { test } from 'node:test';
import * as assert from 'node:assert/strict';
import { Example } from '../src/data';
import { Rng } from '../src/rng';
import { predict, sequenceAccuracy, train, TrainerConfig } from '../src/train';

/** Deterministic toy task: target is the reversed source, uppercased. */
function toyExamples(count: number): Example[] {
  const rng = new Rng(99);
  const alphabet = ['a', 'b', 'c', 'd'];
  const seen = new Set<string>();
  const out: Example[] = [];
  while (out.length < count) {
    const len = 1 + rng.int(4);
    const src: string[] = [];
    for (let i = 0; i < len; i++) src.push(alphabet[rng.int(alphabet.length)]);
    const key = src.join(' ');
    if (seen.has(key)) continue;
    seen.add(key);
    out.push({ src, tgt: [...src].reverse().map((t) => t.toUpperCase()) });
  }
  return out;
}

function toyConfig(epochs: number): TrainerConfig {
  return {
    dataset: '',
    embed: 12,
    hidden: 32,
    layers: 1,
    dropout: 0,
    lr: 5e-3,
    batch: 20,
    epochs,
    seed: 3,
    clip: 5,
    maxDecodeLen: 16,
    lrDecay: 1,
    lrDecayAfter: 0,
  };
}

test('memorizes a 100-pair subset to 100% sequence accuracy', () => {
  const examples = toyExamples(100);
  const { model } = train(toyConfig(150), undefined, examples);
  assert.equal(sequenceAccuracy(model, examples, 16), 1.0);
});

test('loss decreases over early epochs', () => {
  const examples = toyExamples(100);
  const { log } = train(toyConfig(3), undefined, examples);
  assert.ok(log[0].loss > log[1].loss && log[1].loss > log[2].loss, JSON.stringify(log));
});

test('a 1-epoch model still emits aligned, vocabulary-closed predictions', () => {
  const examples = toyExamples(100);
  const { model } = train(toyConfig(1), undefined, examples);
  const unseen = toyExamples(140).slice(100);
  const preds = predict(model, unseen, 16);
  assert.equal(preds.length, unseen.length);
  const targetVocab = new Set(examples.flatMap((e) => e.tgt));
  for (const tokens of preds) {
    assert.ok(tokens.length <= 16);
    for (const tok of tokens) assert.ok(targetVocab.has(tok), tok);
  }
});
