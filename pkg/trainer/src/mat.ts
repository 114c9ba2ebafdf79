/** Dense row-major matrix kernels on Float64Array, sized for small RNNs. */

export function zeros(n: number): Float64Array {
  return new Float64Array(n);
}

/** out[m×n] = a[m×k] · b[k×n]; accumulates instead when add is true. */
export function matmul(
  a: Float64Array, m: number, k: number,
  b: Float64Array, n: number,
  out: Float64Array, add = false,
): void {
  if (!add) out.fill(0, 0, m * n);
  for (let i = 0; i < m; i++) {
    const ao = i * k;
    const co = i * n;
    for (let p = 0; p < k; p++) {
      const av = a[ao + p];
      if (av === 0) continue;
      const bo = p * n;
      for (let j = 0; j < n; j++) out[co + j] += av * b[bo + j];
    }
  }
}

/** out[k×n] += aᵀ · b with a[m×k], b[m×n]; the weight-gradient shape. */
export function matmulAtB(
  a: Float64Array, m: number, k: number,
  b: Float64Array, n: number,
  out: Float64Array,
): void {
  for (let i = 0; i < m; i++) {
    const ao = i * k;
    const bo = i * n;
    for (let p = 0; p < k; p++) {
      const av = a[ao + p];
      if (av === 0) continue;
      const co = p * n;
      for (let j = 0; j < n; j++) out[co + j] += av * b[bo + j];
    }
  }
}

/** out[m×k] = a[m×n] · bᵀ with b[k×n]; accumulates when add is true. */
export function matmulABt(
  a: Float64Array, m: number, n: number,
  b: Float64Array, k: number,
  out: Float64Array, add = false,
): void {
  for (let i = 0; i < m; i++) {
    const ao = i * n;
    const co = i * k;
    for (let p = 0; p < k; p++) {
      const bo = p * n;
      let acc = 0;
      for (let j = 0; j < n; j++) acc += a[ao + j] * b[bo + j];
      if (add) out[co + p] += acc;
      else out[co + p] = acc;
    }
  }
}

/** x[rows×cols] += v broadcast over rows. */
export function addRow(x: Float64Array, rows: number, cols: number, v: Float64Array): void {
  for (let i = 0; i < rows; i++) {
    const o = i * cols;
    for (let j = 0; j < cols; j++) x[o + j] += v[j];
  }
}

/** out[cols] += column sums of x[rows×cols]. */
export function addColSums(x: Float64Array, rows: number, cols: number, out: Float64Array): void {
  for (let i = 0; i < rows; i++) {
    const o = i * cols;
    for (let j = 0; j < cols; j++) out[j] += x[o + j];
  }
}
