/** Presentation helpers: one-decimal scores and level badge colors. */

import { LEVELS } from './types';
import type { EvaluationResponse } from './types';

/** The score string shown everywhere: the service's one-decimal value. */
export function formatScore(response: Pick<EvaluationResponse, 'score'>): string {
  return response.score.toFixed(1);
}

export function formatDelta(delta: number): string {
  const sign = delta > 0 ? '+' : '';
  return `${sign}${delta.toFixed(1)}`;
}

export function levelOrdinal(level: string): number {
  const i = LEVELS.indexOf(level as (typeof LEVELS)[number]);
  return i >= 0 ? i : Math.floor(LEVELS.length / 2);
}

/** Badge color by ordinal: red through amber to green. */
export function levelColor(level: string): string {
  const t = levelOrdinal(level) / (LEVELS.length - 1);
  const hue = Math.round(t * 120); // 0 = red, 120 = green
  return `hsl(${hue}, 70%, 42%)`;
}
