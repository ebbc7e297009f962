/** Shared types mirroring the scoring service's JSON contracts. */

export const RATING_ATTRIBUTES = [
  'exit_from_goal',
  'flexibility',
  'overhead_dominance',
  'establishing_connection',
  'courage',
  'leadership',
  'person_battles',
] as const;

export const HEIGHT_ATTRIBUTE = 'height_cm' as const;

export type RatingAttribute = (typeof RATING_ATTRIBUTES)[number];
export type Attribute = RatingAttribute | typeof HEIGHT_ATTRIBUTE;

export const ATTRIBUTES: readonly Attribute[] = [...RATING_ATTRIBUTES, HEIGHT_ATTRIBUTE];

export const ATTRIBUTE_LABELS: Record<Attribute, string> = {
  exit_from_goal: 'Exit from the goal',
  flexibility: 'Flexibility',
  overhead_dominance: 'Overhead dominance',
  establishing_connection: 'Establishing connection',
  courage: 'Courage',
  leadership: 'Leadership',
  person_battles: 'Person-to-person battles',
  height_cm: 'Height (cm)',
};

export const RATING_RANGE = { min: 0, max: 10, step: 0.5 } as const;
export const HEIGHT_RANGE = { min: 100, max: 220, step: 1 } as const;

/** One slider value per attribute; height in centimeters. */
export type Profile = Record<Attribute, number>;

export interface TopRule {
  index: number;
  strength: number;
  rule: string;
}

export interface EvaluationResponse {
  score: number;
  score_full: number;
  level: string;
  degenerate: boolean;
  degrees: Record<string, Record<string, number>>;
  top_rules: TopRule[];
}

export interface CandidateRecord {
  id: string;
  name: string;
  profile: Profile;
  created_at: string;
  score: number;
  score_full: number;
  level: string;
  rulebase_version: number;
  rank?: number;
  tied?: boolean;
}

/** Nine quality levels, worst to best; index = ordinal. */
export const LEVELS = [
  'Awful',
  'Relatively awful',
  'Bad',
  'Relatively bad',
  'Ordinary',
  'Relatively good',
  'Good',
  'Almost excellent',
  'Excellent',
] as const;
