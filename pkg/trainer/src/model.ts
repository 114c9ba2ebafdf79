/**
 * Recurrent encoder-decoder with dot-product attention, written directly on
 * Float64Array with hand-derived gradients (no autograd, no dependencies).
 *
 * Batches are grouped by exact (source length, target length), so no padding
 * or masking is needed anywhere.
 */

import { addColSums, addRow, matmul, matmulABt, matmulAtB, zeros } from './mat';
import { Rng } from './rng';

export interface Tensor {
  name: string;
  rows: number;
  cols: number;
  w: Float64Array;
  g: Float64Array;
}

function tensor(name: string, rows: number, cols: number): Tensor {
  return { name, rows, cols, w: zeros(rows * cols), g: zeros(rows * cols) };
}

interface GruCell {
  wx: Tensor; // inDim × 3H, gate order [update | reset | candidate]
  wh: Tensor; // H × 3H
  b: Tensor; // 1 × 3H
  inDim: number;
}

interface GruCache {
  x: Float64Array;
  hPrev: Float64Array;
  z: Float64Array;
  r: Float64Array;
  n: Float64Array;
  ghn: Float64Array; // hidden contribution to the candidate gate, pre reset
  h: Float64Array;
}

export interface ModelShape {
  embed: number;
  hidden: number;
  layers: number;
  dropout: number;
}

function sigmoid(x: number): number {
  return 1 / (1 + Math.exp(-x));
}

export class Seq2SeqAttn {
  readonly shape: ModelShape;
  readonly srcTokens: string[];
  readonly tgtTokens: string[];
  readonly bosId = 0;
  readonly eosId = 1;

  srcEmb: Tensor;
  tgtEmb: Tensor;
  enc: GruCell[] = [];
  dec: GruCell[] = [];
  wc: Tensor;
  bc: Tensor;
  wo: Tensor;
  bo: Tensor;

  private scratch = new Map<string, Float64Array>();

  constructor(shape: ModelShape, srcTokens: string[], tgtTokens: string[]) {
    const { embed, hidden, layers } = shape;
    this.shape = shape;
    this.srcTokens = srcTokens;
    this.tgtTokens = tgtTokens;
    this.srcEmb = tensor('src_emb', srcTokens.length, embed);
    this.tgtEmb = tensor('tgt_emb', tgtTokens.length, embed);
    for (let l = 0; l < layers; l++) {
      const inDim = l === 0 ? embed : hidden;
      this.enc.push({
        wx: tensor(`enc${l}.wx`, inDim, 3 * hidden),
        wh: tensor(`enc${l}.wh`, hidden, 3 * hidden),
        b: tensor(`enc${l}.b`, 1, 3 * hidden),
        inDim,
      });
      this.dec.push({
        wx: tensor(`dec${l}.wx`, inDim, 3 * hidden),
        wh: tensor(`dec${l}.wh`, hidden, 3 * hidden),
        b: tensor(`dec${l}.b`, 1, 3 * hidden),
        inDim,
      });
    }
    this.wc = tensor('wc', 2 * hidden, hidden);
    this.bc = tensor('bc', 1, hidden);
    this.wo = tensor('wo', hidden, tgtTokens.length);
    this.bo = tensor('bo', 1, tgtTokens.length);
  }

  params(): Tensor[] {
    const out = [this.srcEmb, this.tgtEmb];
    for (const cell of [...this.enc, ...this.dec]) out.push(cell.wx, cell.wh, cell.b);
    out.push(this.wc, this.bc, this.wo, this.bo);
    return out;
  }

  init(rng: Rng, scale = 0.08): void {
    for (const p of this.params()) {
      if (p.name.endsWith('.b') || p.name.startsWith('b')) continue; // biases stay zero
      for (let i = 0; i < p.w.length; i++) p.w[i] = rng.uniform(-scale, scale);
    }
  }

  private buf(name: string, size: number): Float64Array {
    const existing = this.scratch.get(name);
    if (existing && existing.length >= size) return existing;
    const fresh = zeros(size);
    this.scratch.set(name, fresh);
    return fresh;
  }

  private gather(emb: Tensor, ids: Int32Array, batch: number, offset: number, stride: number): Float64Array {
    const de = emb.cols;
    const out = zeros(batch * de);
    for (let b = 0; b < batch; b++) {
      const row = ids[offset + b * stride] * de;
      out.set(emb.w.subarray(row, row + de), b * de);
    }
    return out;
  }

  private scatterEmbGrad(
    emb: Tensor, ids: Int32Array, batch: number, offset: number, stride: number, dx: Float64Array,
  ): void {
    const de = emb.cols;
    for (let b = 0; b < batch; b++) {
      const row = ids[offset + b * stride] * de;
      for (let j = 0; j < de; j++) emb.g[row + j] += dx[b * de + j];
    }
  }

  private gruForward(cell: GruCell, x: Float64Array, hPrev: Float64Array, batch: number): GruCache {
    const h3 = 3 * this.shape.hidden;
    const hd = this.shape.hidden;
    const gx = this.buf('gru.gx', batch * h3);
    const gh = this.buf('gru.gh', batch * h3);
    matmul(x, batch, cell.inDim, cell.wx.w, h3, gx);
    addRow(gx, batch, h3, cell.b.w);
    matmul(hPrev, batch, hd, cell.wh.w, h3, gh);
    const z = zeros(batch * hd);
    const r = zeros(batch * hd);
    const n = zeros(batch * hd);
    const ghn = zeros(batch * hd);
    const h = zeros(batch * hd);
    for (let b = 0; b < batch; b++) {
      const o3 = b * h3;
      const o1 = b * hd;
      for (let j = 0; j < hd; j++) {
        const zv = sigmoid(gx[o3 + j] + gh[o3 + j]);
        const rv = sigmoid(gx[o3 + hd + j] + gh[o3 + hd + j]);
        const gn = gh[o3 + 2 * hd + j];
        const nv = Math.tanh(gx[o3 + 2 * hd + j] + rv * gn);
        z[o1 + j] = zv;
        r[o1 + j] = rv;
        ghn[o1 + j] = gn;
        n[o1 + j] = nv;
        h[o1 + j] = (1 - zv) * nv + zv * hPrev[o1 + j];
      }
    }
    return { x, hPrev, z, r, n, ghn, h };
  }

  /** Accumulates weight grads; writes input grads to dx and dhPrev. */
  private gruBackward(
    cell: GruCell, cache: GruCache, dh: Float64Array, batch: number,
    dx: Float64Array, dhPrev: Float64Array,
  ): void {
    const hd = this.shape.hidden;
    const h3 = 3 * hd;
    const dgx = this.buf('gru.dgx', batch * h3);
    const dgh = this.buf('gru.dgh', batch * h3);
    for (let b = 0; b < batch; b++) {
      const o3 = b * h3;
      const o1 = b * hd;
      for (let j = 0; j < hd; j++) {
        const dhv = dh[o1 + j];
        const zv = cache.z[o1 + j];
        const rv = cache.r[o1 + j];
        const nv = cache.n[o1 + j];
        const gn = cache.ghn[o1 + j];
        const dn = dhv * (1 - zv);
        const dz = dhv * (cache.hPrev[o1 + j] - nv);
        const dnPre = dn * (1 - nv * nv);
        const dzPre = dz * zv * (1 - zv);
        const dr = dnPre * gn;
        const drPre = dr * rv * (1 - rv);
        dgx[o3 + j] = dzPre;
        dgx[o3 + hd + j] = drPre;
        dgx[o3 + 2 * hd + j] = dnPre;
        dgh[o3 + j] = dzPre;
        dgh[o3 + hd + j] = drPre;
        dgh[o3 + 2 * hd + j] = dnPre * rv;
        dhPrev[o1 + j] = dhv * zv;
      }
    }
    matmulABt(dgx, batch, h3, cell.wx.w, cell.inDim, dx);
    matmulABt(dgh, batch, h3, cell.wh.w, hd, dhPrev, true);
    matmulAtB(cache.x, batch, cell.inDim, dgx, h3, cell.wx.g);
    matmulAtB(cache.hPrev, batch, hd, dgh, h3, cell.wh.g);
    addColSums(dgx, batch, h3, cell.b.g);
  }

  private sampleMask(batch: number, rng: Rng): Float64Array {
    const p = this.shape.dropout;
    const keep = 1 - p;
    const mask = zeros(batch * this.shape.hidden);
    for (let i = 0; i < mask.length; i++) mask[i] = rng.float() < keep ? 1 / keep : 0;
    return mask;
  }

  /**
   * Teacher-forced forward and backward over one uniform-length batch.
   * Returns summed token cross-entropy and the token count; gradients
   * accumulate into every tensor's g.
   */
  trainBatch(
    batch: { size: number; srcLen: number; tgtLen: number; src: Int32Array; tgt: Int32Array },
    rng?: Rng,
  ): { lossSum: number; tokens: number } {
    const { size: bs, srcLen, tgtLen, src, tgt } = batch;
    const { hidden: hd, layers, dropout } = this.shape;
    const vt = this.tgtTokens.length;
    const useDropout = dropout > 0 && rng !== undefined;

    // Encoder
    const encCaches: GruCache[][] = [];
    const encMasks: (Float64Array | null)[][] = [];
    const zeroInit: Float64Array[] = [];
    for (let l = 0; l < layers; l++) {
      encCaches.push([]);
      encMasks.push([]);
      zeroInit.push(zeros(bs * hd));
    }
    for (let t = 0; t < srcLen; t++) {
      let below = this.gather(this.srcEmb, src, bs, t, srcLen);
      for (let l = 0; l < layers; l++) {
        let input = below;
        let mask: Float64Array | null = null;
        if (l > 0 && useDropout) {
          mask = this.sampleMask(bs, rng!);
          input = zeros(bs * hd);
          for (let i = 0; i < input.length; i++) input[i] = below[i] * mask[i];
        }
        encMasks[l][t] = mask;
        const hPrev = t === 0 ? zeroInit[l] : encCaches[l][t - 1].h;
        const cache = this.gruForward(this.enc[l], input, hPrev, bs);
        encCaches[l].push(cache);
        below = cache.h;
      }
    }
    const hEnc = encCaches[layers - 1].map((c) => c.h);

    // Decoder with attention
    const steps = tgtLen + 1; // predict every target token plus eos
    const decCaches: GruCache[][] = [];
    const decMasks: (Float64Array | null)[][] = [];
    for (let l = 0; l < layers; l++) {
      decCaches.push([]);
      decMasks.push([]);
    }
    const alphas: Float64Array[] = [];
    const cats: Float64Array[] = [];
    const activations: Float64Array[] = [];
    const dlogits: Float64Array[] = [];
    const bosIds = new Int32Array(bs).fill(this.bosId);
    let lossSum = 0;
    const tokens = bs * steps;
    const invTokens = 1 / tokens;

    for (let t = 0; t < steps; t++) {
      let below =
        t === 0
          ? this.gather(this.tgtEmb, bosIds, bs, 0, 1)
          : this.gather(this.tgtEmb, tgt, bs, t - 1, tgtLen);
      for (let l = 0; l < layers; l++) {
        let input = below;
        let mask: Float64Array | null = null;
        if (l > 0 && useDropout) {
          mask = this.sampleMask(bs, rng!);
          input = zeros(bs * hd);
          for (let i = 0; i < input.length; i++) input[i] = below[i] * mask[i];
        }
        decMasks[l][t] = mask;
        const hPrev = t === 0 ? encCaches[l][srcLen - 1].h : decCaches[l][t - 1].h;
        const cache = this.gruForward(this.dec[l], input, hPrev, bs);
        decCaches[l].push(cache);
        below = cache.h;
      }
      const hTop = decCaches[layers - 1][t].h;

      const alpha = zeros(bs * srcLen);
      const cat = zeros(bs * 2 * hd);
      this.attend(hTop, hEnc, bs, srcLen, alpha, cat);
      alphas.push(alpha);
      cats.push(cat);

      const act = zeros(bs * hd);
      matmul(cat, bs, 2 * hd, this.wc.w, hd, act);
      addRow(act, bs, hd, this.bc.w);
      for (let i = 0; i < act.length; i++) act[i] = Math.tanh(act[i]);
      activations.push(act);

      const logits = this.buf('logits', bs * vt);
      matmul(act, bs, hd, this.wo.w, vt, logits);
      addRow(logits, bs, vt, this.bo.w);

      const dlog = zeros(bs * vt);
      for (let b = 0; b < bs; b++) {
        const o = b * vt;
        const y = t === tgtLen ? this.eosId : tgt[b * tgtLen + t];
        let max = -Infinity;
        for (let j = 0; j < vt; j++) if (logits[o + j] > max) max = logits[o + j];
        let norm = 0;
        for (let j = 0; j < vt; j++) norm += Math.exp(logits[o + j] - max);
        lossSum += -(logits[o + y] - max - Math.log(norm));
        for (let j = 0; j < vt; j++) {
          dlog[o + j] = (Math.exp(logits[o + j] - max) / norm - (j === y ? 1 : 0)) * invTokens;
        }
      }
      dlogits.push(dlog);
    }

    // Backward through the decoder
    const dhNextDec: Float64Array[] = [];
    for (let l = 0; l < layers; l++) dhNextDec.push(zeros(bs * hd));
    const dEnc: Float64Array[] = [];
    for (let t = 0; t < srcLen; t++) dEnc.push(zeros(bs * hd));
    const dhCur = this.buf('bwd.dhCur', bs * hd);
    const dhPrev = this.buf('bwd.dhPrev', bs * hd);
    const dxHid = this.buf('bwd.dxHid', bs * hd);
    const dxEmb = this.buf('bwd.dxEmb', bs * this.shape.embed);
    const da = this.buf('bwd.da', bs * hd);
    const dcat = this.buf('bwd.dcat', bs * 2 * hd);
    const dctx = this.buf('bwd.dctx', bs * hd);
    const dhAttn = this.buf('bwd.dhAttn', bs * hd);

    for (let t = steps - 1; t >= 0; t--) {
      const dlog = dlogits[t];
      const act = activations[t];
      matmulAtB(act, bs, hd, dlog, vt, this.wo.g);
      addColSums(dlog, bs, vt, this.bo.g);
      matmulABt(dlog, bs, vt, this.wo.w, hd, da);
      for (let i = 0; i < bs * hd; i++) da[i] *= 1 - act[i] * act[i];
      matmulAtB(cats[t], bs, 2 * hd, da, hd, this.wc.g);
      addColSums(da, bs, hd, this.bc.g);
      matmulABt(da, bs, hd, this.wc.w, 2 * hd, dcat);
      for (let b = 0; b < bs; b++) {
        for (let j = 0; j < hd; j++) {
          dhAttn[b * hd + j] = dcat[b * 2 * hd + j];
          dctx[b * hd + j] = dcat[b * 2 * hd + hd + j];
        }
      }
      const hTop = decCaches[layers - 1][t].h;
      this.attendBackward(hTop, hEnc, alphas[t], dctx, bs, srcLen, dhAttn, dEnc);

      for (let i = 0; i < bs * hd; i++) dhCur[i] = dhNextDec[layers - 1][i] + dhAttn[i];
      for (let l = layers - 1; l >= 0; l--) {
        const dx = l === 0 ? dxEmb : dxHid;
        this.gruBackward(this.dec[l], decCaches[l][t], dhCur, bs, dx, dhPrev);
        dhNextDec[l].set(dhPrev.subarray(0, bs * hd));
        if (l > 0) {
          const mask = decMasks[l][t];
          const lower = dhNextDec[l - 1];
          for (let i = 0; i < bs * hd; i++) {
            dhCur[i] = lower[i] + (mask ? dx[i] * mask[i] : dx[i]);
          }
        } else if (t === 0) {
          this.scatterEmbGrad(this.tgtEmb, bosIds, bs, 0, 1, dx);
        } else {
          this.scatterEmbGrad(this.tgtEmb, tgt, bs, t - 1, tgtLen, dx);
        }
      }
    }

    // Backward through the encoder; decoder initial-state grads feed in
    const dhNextEnc = dhNextDec;
    for (let t = srcLen - 1; t >= 0; t--) {
      for (let i = 0; i < bs * hd; i++) dhCur[i] = dhNextEnc[layers - 1][i] + dEnc[t][i];
      for (let l = layers - 1; l >= 0; l--) {
        const dx = l === 0 ? dxEmb : dxHid;
        this.gruBackward(this.enc[l], encCaches[l][t], dhCur, bs, dx, dhPrev);
        dhNextEnc[l].set(dhPrev.subarray(0, bs * hd));
        if (l > 0) {
          const mask = encMasks[l][t];
          const lower = dhNextEnc[l - 1];
          for (let i = 0; i < bs * hd; i++) {
            dhCur[i] = lower[i] + (mask ? dx[i] * mask[i] : dx[i]);
          }
        } else {
          this.scatterEmbGrad(this.srcEmb, src, bs, t, srcLen, dx);
        }
      }
    }

    return { lossSum, tokens };
  }

  /** Dot attention: fills alpha (B×S) and cat = [hTop | context] (B×2H). */
  private attend(
    hTop: Float64Array, hEnc: Float64Array[], bs: number, srcLen: number,
    alpha: Float64Array, cat: Float64Array,
  ): void {
    const hd = this.shape.hidden;
    for (let b = 0; b < bs; b++) {
      const oh = b * hd;
      let max = -Infinity;
      for (let s = 0; s < srcLen; s++) {
        const enc = hEnc[s];
        let score = 0;
        for (let j = 0; j < hd; j++) score += hTop[oh + j] * enc[oh + j];
        alpha[b * srcLen + s] = score;
        if (score > max) max = score;
      }
      let norm = 0;
      for (let s = 0; s < srcLen; s++) {
        const e = Math.exp(alpha[b * srcLen + s] - max);
        alpha[b * srcLen + s] = e;
        norm += e;
      }
      const oc = b * 2 * hd;
      for (let j = 0; j < hd; j++) cat[oc + j] = hTop[oh + j];
      for (let s = 0; s < srcLen; s++) {
        const a = alpha[b * srcLen + s] / norm;
        alpha[b * srcLen + s] = a;
        const enc = hEnc[s];
        for (let j = 0; j < hd; j++) cat[oc + hd + j] += a * enc[oh + j];
      }
    }
  }

  /** Adds attention grads into dhAttn (decoder state) and dEnc (per step). */
  private attendBackward(
    hTop: Float64Array, hEnc: Float64Array[], alpha: Float64Array, dctx: Float64Array,
    bs: number, srcLen: number, dhAttn: Float64Array, dEnc: Float64Array[],
  ): void {
    const hd = this.shape.hidden;
    const dalpha = this.buf('bwd.dalpha', bs * srcLen);
    for (let b = 0; b < bs; b++) {
      const oh = b * hd;
      let rowDot = 0;
      for (let s = 0; s < srcLen; s++) {
        const enc = hEnc[s];
        let d = 0;
        for (let j = 0; j < hd; j++) d += dctx[oh + j] * enc[oh + j];
        dalpha[b * srcLen + s] = d;
        rowDot += d * alpha[b * srcLen + s];
      }
      for (let s = 0; s < srcLen; s++) {
        const a = alpha[b * srcLen + s];
        const dscore = a * (dalpha[b * srcLen + s] - rowDot);
        const enc = hEnc[s];
        const dEncStep = dEnc[s];
        for (let j = 0; j < hd; j++) {
          dhAttn[oh + j] += dscore * enc[oh + j];
          dEncStep[oh + j] += a * dctx[oh + j] + dscore * hTop[oh + j];
        }
      }
    }
  }

  /** Greedy decode; returns per-row target ids without bos/eos. */
  decodeBatch(src: Int32Array, bs: number, srcLen: number, maxLen = 64): number[][] {
    const { hidden: hd, layers } = this.shape;
    // Encoder, eval mode
    const hEnc: Float64Array[] = [];
    let hPrevs: Float64Array[] = [];
    for (let l = 0; l < layers; l++) hPrevs.push(zeros(bs * hd));
    for (let t = 0; t < srcLen; t++) {
      let below = this.gather(this.srcEmb, src, bs, t, srcLen);
      for (let l = 0; l < layers; l++) {
        const cache = this.gruForward(this.enc[l], below, hPrevs[l], bs);
        hPrevs[l] = cache.h;
        below = cache.h;
      }
      hEnc.push(hPrevs[layers - 1]);
    }

    const out: number[][] = [];
    const done: boolean[] = [];
    for (let b = 0; b < bs; b++) {
      out.push([]);
      done.push(false);
    }
    const vt = this.tgtTokens.length;
    const prev = new Int32Array(bs).fill(this.bosId);
    let h = hPrevs;
    for (let step = 0; step < maxLen; step++) {
      let below = this.gather(this.tgtEmb, prev, bs, 0, 1);
      const next: Float64Array[] = [];
      for (let l = 0; l < layers; l++) {
        const cache = this.gruForward(this.dec[l], below, h[l], bs);
        next.push(cache.h);
        below = cache.h;
      }
      h = next;
      const hTop = h[layers - 1];
      const alpha = this.buf('dec.alpha', bs * srcLen);
      const cat = this.buf('dec.cat', bs * 2 * hd);
      cat.fill(0, 0, bs * 2 * hd);
      this.attend(hTop, hEnc, bs, srcLen, alpha, cat);
      const act = this.buf('dec.act', bs * hd);
      matmul(cat, bs, 2 * hd, this.wc.w, hd, act);
      addRow(act, bs, hd, this.bc.w);
      for (let i = 0; i < bs * hd; i++) act[i] = Math.tanh(act[i]);
      const logits = this.buf('dec.logits', bs * vt);
      matmul(act, bs, hd, this.wo.w, vt, logits);
      addRow(logits, bs, vt, this.bo.w);
      let anyActive = false;
      for (let b = 0; b < bs; b++) {
        if (done[b]) {
          prev[b] = this.eosId;
          continue;
        }
        const o = b * vt;
        let best = 0;
        for (let j = 1; j < vt; j++) if (logits[o + j] > logits[o + best]) best = j;
        if (best === this.eosId) {
          done[b] = true;
          prev[b] = this.eosId;
        } else {
          out[b].push(best);
          prev[b] = best;
          anyActive = true;
        }
      }
      if (!anyActive && done.every(Boolean)) break;
    }
    return out;
  }
}
