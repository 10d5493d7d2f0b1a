/**
 * Typed-array client for the `icmetrics` command line tool.
 *
 * The heavy lifting (exact interaction-concordance counting, tie handling,
 * thread fan-out) happens in the Python package; this module marshals dense
 * integer ids and float64 values into the CLI's tabular format, runs
 * `icmetrics metrics --format json-lines`, and parses the reports back.
 * Everything is plain subprocess work, so it is safe to call concurrently.
 */

import { execFile } from "node:child_process";
import { mkdtemp, rm, writeFile } from "node:fs/promises";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { promisify } from "node:util";

const execFileAsync = promisify(execFile);

/** Kept in lockstep with the core package version. */
export const VERSION = "0.1.0";

export type MetricName =
  | "accuracy"
  | "c_index"
  | "c_index_drugwise"
  | "c_index_targetwise"
  | "ic_index";

/** CLI short codes, keyed by report name. */
const METRIC_CODES: Record<MetricName, string> = {
  accuracy: "acc",
  c_index: "c",
  c_index_drugwise: "cd",
  c_index_targetwise: "ct",
  ic_index: "ic",
};

/**
 * One record per index position: drug `drugIds[i]` and target `targetIds[i]`
 * have observed affinity `y[i]` and model prediction `pred[i]`. Ids are
 * dense non-negative integers; use {@link densify} to build them from
 * string identifiers.
 */
export interface TripletArrays {
  drugIds: Int32Array;
  targetIds: Int32Array;
  y: Float64Array;
  pred: Float64Array;
}

export interface EvaluateOptions {
  /** Half-width of the prediction tie band; c-index family only. */
  tieTol?: number;
  /** Groupwise aggregation; only meaningful with the groupwise metrics. */
  averaging?: "pooled" | "macro";
  /** Worker threads for the interaction metric. */
  threads?: number;
  /** Executable to run (defaults to `icmetrics` on PATH). */
  executable?: string;
}

export interface MetricReport {
  metric: MetricName;
  value: number;
  numerator: number;
  denominator: number;
  /** True when no comparable pairs existed and the value fell back to 0.5. */
  defaulted: boolean;
}

/** Raised when the CLI exits non-zero; carries its exit code and stderr. */
export class CliError extends Error {
  readonly exitCode: number;
  readonly stderr: string;

  constructor(exitCode: number, stderr: string) {
    super(`icmetrics exited with code ${exitCode}: ${stderr.trim()}`);
    this.name = "CliError";
    this.exitCode = exitCode;
    this.stderr = stderr;
  }
}

export interface DensifyResult {
  drugIds: Int32Array;
  targetIds: Int32Array;
  nDrugs: number;
  nTargets: number;
}

/**
 * Map string identifiers to dense indices in first-appearance order.
 * Positions pair up: `drugs[i]` goes with `targets[i]`.
 */
export function densify(
  drugs: readonly string[],
  targets: readonly string[],
): DensifyResult {
  if (drugs.length !== targets.length) {
    throw new RangeError(
      `drugs length ${drugs.length} does not match targets length ${targets.length}`,
    );
  }
  const drugIndex = new Map<string, number>();
  const targetIndex = new Map<string, number>();
  const drugIds = new Int32Array(drugs.length);
  const targetIds = new Int32Array(targets.length);
  for (let i = 0; i < drugs.length; i++) {
    const drug = drugs[i]!;
    const target = targets[i]!;
    if (drug === "" || target === "") {
      throw new RangeError(`empty identifier at record ${i}`);
    }
    let d = drugIndex.get(drug);
    if (d === undefined) {
      d = drugIndex.size;
      drugIndex.set(drug, d);
    }
    let t = targetIndex.get(target);
    if (t === undefined) {
      t = targetIndex.size;
      targetIndex.set(target, t);
    }
    drugIds[i] = d;
    targetIds[i] = t;
  }
  return {
    drugIds,
    targetIds,
    nDrugs: drugIndex.size,
    nTargets: targetIndex.size,
  };
}

function validate(data: TripletArrays): void {
  const n = data.drugIds.length;
  for (const [name, array] of [
    ["targetIds", data.targetIds],
    ["y", data.y],
    ["pred", data.pred],
  ] as const) {
    if (array.length !== n) {
      throw new RangeError(
        `${name} length ${array.length} does not match ${n} records`,
      );
    }
  }
  for (let i = 0; i < n; i++) {
    if (data.drugIds[i]! < 0 || data.targetIds[i]! < 0) {
      throw new RangeError(`negative id at record ${i}`);
    }
    if (!Number.isFinite(data.y[i]!) || !Number.isFinite(data.pred[i]!)) {
      throw new RangeError(`non-finite value at record ${i}`);
    }
  }
}

/**
 * Shortest decimal string that parses back to exactly the same double.
 * This is what `String` produces for finite numbers, so the CLI sees
 * bit-identical values.
 */
export function serializeValue(value: number): string {
  if (!Number.isFinite(value)) {
    throw new RangeError(`cannot serialize non-finite value ${value}`);
  }
  // -0 prints as "0"; the metrics compare values, and -0 compares equal to 0.
  return String(value);
}

/** Render records as the CLI's csv input format. */
export function tripletsToCsv(data: TripletArrays): string {
  validate(data);
  const lines = ["drug,target,y,pred"];
  for (let i = 0; i < data.drugIds.length; i++) {
    lines.push(
      `${data.drugIds[i]},${data.targetIds[i]},` +
        `${serializeValue(data.y[i]!)},${serializeValue(data.pred[i]!)}`,
    );
  }
  return lines.join("\n") + "\n";
}

function cliArgs(
  path: string,
  names: readonly MetricName[],
  options: EvaluateOptions,
): string[] {
  const codes = names.map((name) => {
    const code = METRIC_CODES[name];
    if (code === undefined) {
      throw new RangeError(`unknown metric ${JSON.stringify(name)}`);
    }
    return code;
  });
  const args = [
    "metrics",
    "--in",
    path,
    "--metrics",
    codes.join(","),
    "--format",
    "json-lines",
  ];
  if (options.tieTol !== undefined) {
    args.push("--tie-tol", serializeValue(options.tieTol));
  }
  if (options.averaging !== undefined) {
    args.push("--averaging", options.averaging);
  }
  if (options.threads !== undefined) {
    args.push("--threads", String(options.threads));
  }
  return args;
}

function parseReports(stdout: string): MetricReport[] {
  return stdout
    .split("\n")
    .filter((line) => line.length > 0)
    .map((line) => JSON.parse(line) as MetricReport);
}

/**
 * Evaluate metrics in one CLI run; reports come back in request order.
 * Rejects with {@link CliError} when the tool refuses the input (duplicate
 * pairs, bad option combinations, ...).
 */
export async function evaluateMetrics(
  names: readonly MetricName[],
  data: TripletArrays,
  options: EvaluateOptions = {},
): Promise<MetricReport[]> {
  if (names.length === 0) {
    throw new RangeError("no metrics requested");
  }
  validate(data);
  const dir = await mkdtemp(join(tmpdir(), "icmetrics-"));
  try {
    const path = join(dir, "triplets.csv");
    await writeFile(path, tripletsToCsv(data), "utf8");
    const executable = options.executable ?? "icmetrics";
    try {
      const { stdout } = await execFileAsync(
        executable,
        cliArgs(path, names, options),
      );
      return parseReports(stdout);
    } catch (error) {
      const failure = error as { code?: number | string; stderr?: string };
      if (typeof failure.code === "number" && failure.code > 0) {
        throw new CliError(failure.code, failure.stderr ?? "");
      }
      throw error;
    }
  } finally {
    await rm(dir, { recursive: true, force: true });
  }
}

export async function evaluateMetric(
  name: MetricName,
  data: TripletArrays,
  options: EvaluateOptions = {},
): Promise<MetricReport> {
  const [report] = await evaluateMetrics([name], data, options);
  return report!;
}
