/**
 * Figure builders for the simulation tool's outputs. Each returns a
 * complete SVG document as a string; callers decide where to write it.
 */

import { scaleLinear, scaleLog } from "d3-scale";
import { line } from "d3-shape";

import { EigenTable, InputError, SweepRow, Trajectory } from "./csv.js";
import {
  HEIGHT,
  MARGIN,
  WIDTH,
  closeFigure,
  dot,
  legend,
  openFigure,
  polyline,
  xAxis,
  yAxis,
} from "./svg.js";

const SECTOR_COLORS: Array<[string, string]> = [
  ["00", "#1f77b4"],
  ["01", "#ff7f0e"],
  ["10", "#2ca02c"],
  ["11", "#d62728"],
];

function withHash(title: string, configHash?: string): string {
  return configHash ? `${title} [config ${configHash}]` : title;
}

function innerX(): [number, number] {
  return [MARGIN.left, WIDTH - MARGIN.right];
}

function innerY(): [number, number] {
  return [HEIGHT - MARGIN.bottom, MARGIN.top];
}

/** Concurrence against cooperativity, log-scaled C axis. */
export function plotConcurrence(rows: SweepRow[], configHash?: string): string {
  const good = rows.filter((r) => r.error === "" && Number.isFinite(r.concurrence));
  if (good.length === 0) {
    throw new InputError("no successful sweep points to plot");
  }
  const cs = good.map((r) => r.cooperativity);
  if (cs.some((c) => !(c > 0))) {
    throw new InputError("cooperativity values must be positive for a log axis");
  }
  const x = scaleLog()
    .domain([Math.min(...cs) / 1.5, Math.max(...cs) * 1.5])
    .range(innerX());
  const y = scaleLinear().domain([0, 1]).range(innerY());

  const frame = openFigure(withHash("Concurrence vs cooperativity (optimum detuning)", configHash));
  xAxis(frame, x, "cooperativity C (log scale)", true);
  yAxis(frame, y, "concurrence");
  const ordered = [...good].sort((a, b) => a.cooperativity - b.cooperativity);
  if (ordered.length > 1) {
    const path = line<SweepRow>()
      .x((r) => x(r.cooperativity))
      .y((r) => y(r.concurrence))(ordered);
    polyline(frame, path ?? "", "#1f77b4");
  }
  for (const row of ordered) {
    dot(frame, x(row.cooperativity), y(row.concurrence), "#1f77b4");
  }
  return closeFigure(frame);
}

/** Overlaid parametric curves of the four sector field paths. */
export function plotPhaseSpace(
  sectors: Record<string, Trajectory>,
  configHash?: string,
): string {
  const labels = SECTOR_COLORS.map(([name]) => name);
  for (const label of labels) {
    if (!(label in sectors)) {
      throw new InputError(`missing trajectory for sector ${label}`);
    }
  }
  const reference = sectors[labels[0]].t;
  for (const label of labels) {
    const t = sectors[label].t;
    if (t.length !== reference.length || t.some((v, i) => v !== reference[i])) {
      throw new InputError(`sector ${label} trajectory uses a different time grid`);
    }
  }
  const allRe = labels.flatMap((l) => sectors[l].re);
  const allIm = labels.flatMap((l) => sectors[l].im);
  const pad = (lo: number, hi: number): [number, number] => {
    const span = hi - lo || 1;
    return [lo - 0.05 * span, hi + 0.05 * span];
  };
  const x = scaleLinear().domain(pad(Math.min(...allRe), Math.max(...allRe))).range(innerX());
  const y = scaleLinear().domain(pad(Math.min(...allIm), Math.max(...allIm))).range(innerY());

  const frame = openFigure(withHash("Conditioned cavity paths in phase space", configHash));
  xAxis(frame, x, "Re α");
  yAxis(frame, y, "Im α");
  for (const [label, color] of SECTOR_COLORS) {
    const traj = sectors[label];
    const points = traj.t.map((_, i) => i);
    const path = line<number>()
      .x((i) => x(traj.re[i]))
      .y((i) => y(traj.im[i]))(points);
    polyline(frame, path ?? "", color);
  }
  legend(frame, SECTOR_COLORS.map(([name, color]) => [`sector ${name}`, color]));
  return closeFigure(frame);
}

/** The four tracked branch energies against time. */
export function plotEigenvalues(table: EigenTable, configHash?: string): string {
  if (table.t.length === 0) {
    throw new InputError("eigenvalue table has no rows");
  }
  const all = table.lambda.flat();
  const lo = Math.min(...all);
  const hi = Math.max(...all);
  const span = hi - lo || 1;
  const x = scaleLinear().domain([table.t[0], table.t[table.t.length - 1]]).range(innerX());
  const y = scaleLinear().domain([lo - 0.05 * span, hi + 0.05 * span]).range(innerY());

  const frame = openFigure(withHash("Tracked branch energies", configHash));
  xAxis(frame, x, "t");
  yAxis(frame, y, "λ(t)");
  table.lambda.forEach((values, k) => {
    const points = table.t.map((_, i) => i);
    const path = line<number>()
      .x((i) => x(table.t[i]))
      .y((i) => y(values[i]))(points);
    polyline(frame, path ?? "", SECTOR_COLORS[k][1]);
  });
  legend(frame, SECTOR_COLORS.map(([name, color]) => [`λ ${name}`, color]));
  return closeFigure(frame);
}
