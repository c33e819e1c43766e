/**
 * Panel builders: each takes parsed artifact tables and returns SVG text.
 */

import {
  DistributionTable,
  GenerationsTable,
  TrajectoryTable,
} from "./csv.js";
import { renderChart, Series } from "./svg.js";

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/** Objective vs generation: population average (upper) and best (lower). */
export function objectivePanel(gens: GenerationsTable): string {
  return renderChart({
    title: "Objective vs generation",
    xLabel: "generation",
    yLabel: "J",
    series: [
      {
        label: "population average",
        x: gens.generation,
        y: gens.avgJ,
        color: PALETTE[1],
        dashed: true,
      },
      {
        label: "best individual",
        x: gens.generation,
        y: gens.bestJ,
        color: PALETTE[0],
      },
    ],
  });
}

/** Optimized occupation-number distribution n(k). */
export function distributionPanel(dist: DistributionTable): string {
  return renderChart({
    title: "Occupation-number distribution",
    xLabel: "k",
    yLabel: "n(k)",
    series: [{ label: "n(k)", x: dist.k, y: dist.n, color: PALETTE[0] }],
  });
}

/** Diagonal density-matrix elements over time. */
export function trajectoryPanel(traj: TrajectoryTable): string {
  const series: Series[] = Array.from({ length: traj.dim }, (_, l) => ({
    label: `rho_${l + 1}${l + 1}`,
    x: traj.t,
    y: traj.populations.map((row) => row[l]),
    color: PALETTE[l % PALETTE.length],
  }));
  return renderChart({
    title: "Population dynamics",
    xLabel: "t",
    yLabel: "population",
    series,
  });
}

/** Overlay of two distributions, e.g. thermal vs optimized multi-peak. */
export function comparePanel(
  a: DistributionTable,
  b: DistributionTable,
  labelA = "reference",
  labelB = "optimized",
): string {
  return renderChart({
    title: "Distribution comparison",
    xLabel: "k",
    yLabel: "n(k)",
    series: [
      { label: labelA, x: a.k, y: a.n, color: PALETTE[1], dashed: true },
      { label: labelB, x: b.k, y: b.n, color: PALETTE[0] },
    ],
  });
}
