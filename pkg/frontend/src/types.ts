/** Document shapes exchanged with the capforge service. */

export type FactorKind =
  | "Time"
  | "Location"
  | "Activity"
  | "UserState"
  | "ObjectState"
  | "DigitalState";

export interface FactorDoc {
  id: string;
  kind: FactorKind;
  instances: string[];
  default_instance: string;
  controllable: boolean;
  anchor: [number, number] | null;
}

export interface EnvironmentDoc {
  name: string;
  factors: FactorDoc[];
}

export interface SceneDoc {
  seq: number;
  day?: number;
  assignments: Record<string, string>;
}

export interface HistoryDoc {
  env_ref: string;
  scene_count: number;
  scenes: SceneDoc[];
}

export interface InstanceRefDoc {
  factor: string;
  instance: string;
}

export interface PolicyDoc {
  id: string;
  action: InstanceRefDoc;
  trigger: Record<string, string[]>;
}

export interface TestCaseDoc {
  id: string;
  policy_id: string;
  focus_factor: string;
  condition: 1 | 2 | 3;
  suggested: InstanceRefDoc;
  fillers: Record<string, string>;
  rationale: string;
}

export interface TestSuiteDoc {
  policy_id: string;
  threshold: number;
  seed: number;
  cases: TestCaseDoc[];
}

export interface FactorMatchDoc {
  factor: string;
  selected: string[];
  actual: string;
  matched: boolean;
}

export interface EnactmentDoc {
  triggered: boolean;
  matches: FactorMatchDoc[];
  scene: SceneDoc;
}

export interface MetricsDoc {
  tp: number;
  fp: number;
  fn: number;
  tn: number;
  precision: number;
  recall: number;
  f_score: number;
}

export interface ReportDoc {
  action: InstanceRefDoc;
  action_support: number;
  scene_count: number;
  u_by_factor: Record<string, number>;
  concurrency: Record<string, Record<string, number>>;
}

export type InstanceState = "Blue" | "Pink" | "Red";
export type DisplayStates = Record<string, Record<string, InstanceState>>;

export type RefineDecision =
  | "add_suggested"
  | "remove_focus_factor"
  | "widen_selected"
  | "dismiss";
