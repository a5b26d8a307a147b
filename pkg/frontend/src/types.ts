/** JSON shapes shared with the analysis service. */

export type Sex = "M" | "F" | "U";
export type Genotype = "00" | "01" | "10" | "11";
export type PhenotypeKind = "affected" | "unaffected";
export type TestResult = "positive" | "negative";

export const GENOTYPES: readonly Genotype[] = ["00", "01", "10", "11"];

export interface PhenotypeDoc {
  kind: PhenotypeKind;
  age: number;
}

export interface IndividualDoc {
  id: string;
  sex: Sex;
  father: string | null;
  mother: string | null;
  phenotype: PhenotypeDoc | null;
  /** Present only when constrained to a strict subset, sorted. */
  genotypes?: Genotype[];
  twin_group: string | null;
}

export interface TestDoc {
  id: string;
  result: TestResult;
  sensitivity: number;
  specificity: number;
}

export interface PedigreeDoc {
  individuals: IndividualDoc[];
  /** Omitted entirely when there are no tests. */
  tests?: TestDoc[];
}

export interface PosteriorQuery {
  type: "posterior";
}

export interface RiskQueryDoc {
  type: "risk";
  individual: string;
  tau?: number;
  tmax?: number;
  dt?: number;
}

export type Query = PosteriorQuery | RiskQueryDoc;

export interface AnalyzeRequest {
  pedigree: PedigreeDoc;
  model?: Record<string, unknown>;
  queries: Query[];
}

export interface CurvePayload {
  individual: string;
  pi: number;
  tau: number;
  ages: number[];
  risk_no_competing: number[];
  risk_competing: number[] | null;
  posterior_carrier: number[];
  posterior_hazard: number[];
}

export interface AnalyzeResponse {
  log_evidence: number;
  tree_stats: { variables: number; cliques: number; treewidth: number; table_cost: number };
  warnings: string[];
  marginals?: Record<string, Record<Genotype, number>>;
  carrier_probability?: Record<string, number>;
  curves?: CurvePayload[];
}

export interface ImpossibleDetail {
  reason: "impossible_evidence";
  log_evidence: string;
  explanation: string;
}
