/** Adam with global-norm gradient clipping. */

import { Tensor } from './model';
import { zeros } from './mat';

export class Adam {
  private m: Float64Array[];
  private v: Float64Array[];
  private t = 0;

  constructor(
    private params: Tensor[],
    private lr: number,
    private beta1 = 0.9,
    private beta2 = 0.999,
    private eps = 1e-8,
  ) {
    this.m = params.map((p) => zeros(p.w.length));
    this.v = params.map((p) => zeros(p.w.length));
  }

  setLr(lr: number): void {
    this.lr = lr;
  }

  /** Applies one update from accumulated grads, then zeroes them. */
  step(clipNorm = 5): void {
    let sq = 0;
    for (const p of this.params) {
      for (let i = 0; i < p.g.length; i++) sq += p.g[i] * p.g[i];
    }
    const norm = Math.sqrt(sq);
    const scale = clipNorm > 0 && norm > clipNorm ? clipNorm / norm : 1;
    this.t++;
    const c1 = 1 - this.beta1 ** this.t;
    const c2 = 1 - this.beta2 ** this.t;
    for (let k = 0; k < this.params.length; k++) {
      const p = this.params[k];
      const m = this.m[k];
      const v = this.v[k];
      for (let i = 0; i < p.w.length; i++) {
        const g = p.g[i] * scale;
        m[i] = this.beta1 * m[i] + (1 - this.beta1) * g;
        v[i] = this.beta2 * v[i] + (1 - this.beta2) * g * g;
        p.w[i] -= (this.lr * (m[i] / c1)) / (Math.sqrt(v[i] / c2) + this.eps);
        p.g[i] = 0;
      }
    }
  }
}
