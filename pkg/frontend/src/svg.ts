/**
 * Minimal deterministic SVG line-chart builder.
 *
 * No timestamps, randomness, or environment-dependent state: the same data
 * always renders to the same bytes. Coordinates are written with fixed
 * precision so floating-point noise cannot leak into the output.
 */

export interface Series {
  label: string;
  x: number[];
  y: number[];
  color: string;
  dashed?: boolean;
}

export interface ChartSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  logY?: boolean;
}

const WIDTH = 640;
const HEIGHT = 420;
const MARGIN = { top: 40, right: 24, bottom: 52, left: 72 };

const fmt = (v: number): string => v.toFixed(2);

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!Number.isFinite(lo) || !Number.isFinite(hi)) {
    return [0, 1];
  }
  if (lo === hi) {
    return [lo - 0.5, hi + 0.5];
  }
  return [lo, hi];
}

function ticks(lo: number, hi: number, count = 5): number[] {
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const candidates = [step, 2 * step, 5 * step, 10 * step];
  const pick = candidates.find((s) => span / s <= count) ?? 10 * step;
  const out: number[] = [];
  for (let v = Math.ceil(lo / pick) * pick; v <= hi + 1e-12 * span; v += pick) {
    out.push(Math.abs(v) < 1e-12 * span ? 0 : v);
  }
  return out;
}

function tickLabel(v: number): string {
  if (v === 0) return "0";
  const abs = Math.abs(v);
  if (abs >= 1e4 || abs < 1e-3) return v.toExponential(1);
  return String(parseFloat(v.toPrecision(6)));
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

export function renderChart(spec: ChartSpec): string {
  const allX = spec.series.flatMap((s) => s.x);
  const rawY = spec.series.flatMap((s) => s.y);
  const yValues = spec.logY ? rawY.filter((v) => v > 0).map(Math.log10) : rawY;
  const [xLo, xHi] = extent(allX);
  const [yLo, yHi] = extent(yValues);

  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const sx = (v: number): number => MARGIN.left + ((v - xLo) / (xHi - xLo)) * plotW;
  const sy = (v: number): number => {
    const t = spec.logY ? Math.log10(Math.max(v, Number.MIN_VALUE)) : v;
    return MARGIN.top + plotH - ((t - yLo) / (yHi - yLo)) * plotH;
  };

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="15">` +
      `${escapeXml(spec.title)}</text>`,
  );

  // axes
  const x0 = MARGIN.left;
  const y0 = MARGIN.top + plotH;
  parts.push(
    `<line x1="${x0}" y1="${MARGIN.top}" x2="${x0}" y2="${y0}" stroke="black"/>`,
  );
  parts.push(
    `<line x1="${x0}" y1="${y0}" x2="${x0 + plotW}" y2="${y0}" stroke="black"/>`,
  );
  for (const v of ticks(xLo, xHi)) {
    const px = fmt(sx(v));
    parts.push(`<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 5}" stroke="black"/>`);
    parts.push(
      `<text x="${px}" y="${y0 + 20}" text-anchor="middle" font-size="11">` +
        `${tickLabel(v)}</text>`,
    );
  }
  const yTickValues = ticks(yLo, yHi);
  for (const v of yTickValues) {
    const value = spec.logY ? Math.pow(10, v) : v;
    const py = fmt(MARGIN.top + plotH - ((v - yLo) / (yHi - yLo)) * plotH);
    parts.push(`<line x1="${x0 - 5}" y1="${py}" x2="${x0}" y2="${py}" stroke="black"/>`);
    parts.push(
      `<text x="${x0 - 8}" y="${py}" text-anchor="end" dominant-baseline="middle" ` +
        `font-size="11">${tickLabel(value)}</text>`,
    );
  }
  parts.push(
    `<text x="${x0 + plotW / 2}" y="${HEIGHT - 12}" text-anchor="middle" ` +
      `font-size="13">${escapeXml(spec.xLabel)}</text>`,
  );
  parts.push(
    `<text x="18" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="13" ` +
      `transform="rotate(-90 18 ${MARGIN.top + plotH / 2})">` +
      `${escapeXml(spec.yLabel)}</text>`,
  );

  // series
  for (const s of spec.series) {
    const points = s.x
      .map((xv, i) => `${fmt(sx(xv))},${fmt(sy(s.y[i]))}`)
      .join(" ");
    const dash = s.dashed ? ' stroke-dasharray="6,4"' : "";
    parts.push(
      `<polyline fill="none" stroke="${s.color}" stroke-width="1.5"${dash} ` +
        `points="${points}" data-label="${escapeXml(s.label)}"/>`,
    );
  }

  // legend
  spec.series.forEach((s, i) => {
    const ly = MARGIN.top + 14 + 18 * i;
    const lx = x0 + plotW - 150;
    const dash = s.dashed ? ' stroke-dasharray="6,4"' : "";
    parts.push(
      `<line x1="${lx}" y1="${ly}" x2="${lx + 26}" y2="${ly}" ` +
        `stroke="${s.color}" stroke-width="1.5"${dash}/>`,
    );
    parts.push(
      `<text x="${lx + 32}" y="${ly + 4}" font-size="12">${escapeXml(s.label)}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
