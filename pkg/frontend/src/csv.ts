/**
 * Parsers for the run artifact CSVs.
 *
 * All artifacts are comma-separated with a fixed header row and LF line
 * endings. Schema violations throw SchemaError naming the offending column
 * or file.
 */

export class SchemaError extends Error {}

export interface GenerationsTable {
  generation: number[];
  bestJ: number[];
  avgJ: number[];
}

export interface DistributionTable {
  k: number[];
  n: number[];
}

export interface TrajectoryTable {
  t: number[];
  /** populations[i][l] = rho_{l+1,l+1} at time t[i] */
  populations: number[][];
  maxOffdiag: number[];
  dim: number;
}

export interface BestParamsTable {
  index: number[];
  centers: number[];
  widths: number[];
}

function splitRows(text: string, file: string): string[][] {
  const lines = text.split("\n").filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError(`${file}: empty file`);
  }
  return lines.map((line) => line.split(","));
}

function parseNumber(cell: string, file: string, column: string): number {
  const value = Number(cell);
  if (cell.trim() === "" || Number.isNaN(value)) {
    throw new SchemaError(`${file}: column '${column}' has non-numeric value '${cell}'`);
  }
  return value;
}

function checkHeader(header: string[], expected: string[], file: string): void {
  for (let i = 0; i < expected.length; i++) {
    if (header[i] !== expected[i]) {
      throw new SchemaError(
        `${file}: expected column '${expected[i]}' at position ${i + 1}, ` +
          `found '${header[i] ?? "<missing>"}'`,
      );
    }
  }
  if (header.length !== expected.length) {
    throw new SchemaError(
      `${file}: unexpected extra column '${header[expected.length]}'`,
    );
  }
}

function requireData(rows: string[][], file: string): void {
  if (rows.length < 2) {
    throw new SchemaError(`${file}: no data rows after the header`);
  }
}

function column(
  rows: string[][],
  index: number,
  file: string,
  name: string,
): number[] {
  return rows.slice(1).map((row) => parseNumber(row[index] ?? "", file, name));
}

export function parseGenerations(text: string, file = "generations.csv"): GenerationsTable {
  const rows = splitRows(text, file);
  checkHeader(rows[0], ["generation", "best_J", "avg_J"], file);
  requireData(rows, file);
  return {
    generation: column(rows, 0, file, "generation"),
    bestJ: column(rows, 1, file, "best_J"),
    avgJ: column(rows, 2, file, "avg_J"),
  };
}

export function parseDistribution(text: string, file = "distribution.csv"): DistributionTable {
  const rows = splitRows(text, file);
  checkHeader(rows[0], ["k", "n_k"], file);
  requireData(rows, file);
  return {
    k: column(rows, 0, file, "k"),
    n: column(rows, 1, file, "n_k"),
  };
}

export function parseTrajectory(text: string, file = "trajectory.csv"): TrajectoryTable {
  const rows = splitRows(text, file);
  const header = rows[0];
  if (header[0] !== "t") {
    throw new SchemaError(`${file}: expected column 't' at position 1, found '${header[0]}'`);
  }
  if (header[header.length - 1] !== "max_offdiag") {
    throw new SchemaError(
      `${file}: expected final column 'max_offdiag', found '${header[header.length - 1]}'`,
    );
  }
  const dim = header.length - 2;
  if (dim < 1) {
    throw new SchemaError(`${file}: no rho_ll population columns`);
  }
  for (let l = 1; l <= dim; l++) {
    const expected = `rho_${l}${l}`;
    if (header[l] !== expected) {
      throw new SchemaError(
        `${file}: expected column '${expected}' at position ${l + 1}, found '${header[l]}'`,
      );
    }
  }
  requireData(rows, file);
  const t = column(rows, 0, file, "t");
  const populations = rows
    .slice(1)
    .map((row) =>
      Array.from({ length: dim }, (_, l) =>
        parseNumber(row[l + 1] ?? "", file, `rho_${l + 1}${l + 1}`),
      ),
    );
  return {
    t,
    populations,
    maxOffdiag: column(rows, dim + 1, file, "max_offdiag"),
    dim,
  };
}

export function parseBestParams(text: string, file = "best_params.csv"): BestParamsTable {
  const rows = splitRows(text, file);
  checkHeader(rows[0], ["i", "k_i", "D_i"], file);
  requireData(rows, file);
  return {
    index: column(rows, 0, file, "i"),
    centers: column(rows, 1, file, "k_i"),
    widths: column(rows, 2, file, "D_i"),
  };
}
