// Wire types for the nl2api HTTP API.

export type Scalar = string | number | boolean;

export interface Command {
  api_id: string;
  inputs: Record<string, Scalar>;
  info: string[];
}

export interface ResultTable {
  columns: string[];
  rows: Scalar[][];
}

export interface TraceEntry {
  stage: string;
  prompt_digest: string;
  raw_output: string;
  duration_ms: number;
}

export type OutcomeKind = 'answered' | 'clarify' | 'failed';

export interface Outcome {
  kind: OutcomeKind;
  command?: Command;
  table?: ResultTable;
  clarification?: string;
  error?: string;
  trace?: TraceEntry[];
}

export interface Violation {
  code: string;
  path: string;
  message: string;
}

export interface ExecuteResult {
  command?: Command;
  table?: ResultTable;
  violations?: Violation[];
}

export interface CatalogEntry {
  api_id: string;
  display_name: string;
}

export interface CatalogListing {
  version: string;
  apis: CatalogEntry[];
}

export interface ArgSpec {
  name: string;
  type: string;
  required?: boolean;
  meaning: string;
  enum_values?: string[];
  unit?: string;
}

export interface ApiSpec {
  api_id: string;
  display_name: string;
  description: string;
  aliases: string[];
  inputs: ArgSpec[];
  outputs: ArgSpec[];
}

/** Canonical single-line command text, byte-equal to the server's wire form
 * (key order api_id, inputs, info is preserved from the response JSON). */
export function canonicalCommand(command: Command): string {
  return JSON.stringify({
    api_id: command.api_id,
    inputs: command.inputs,
    info: command.info,
  });
}
