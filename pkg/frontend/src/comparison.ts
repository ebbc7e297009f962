/** Side-by-side comparison of selected roster candidates.
 *
 * Columns are ordered best score first; each attribute row highlights the
 * maximum across the selected candidates; equal scores get a tie badge.
 */

import { ATTRIBUTES, ATTRIBUTE_LABELS } from './types';
import type { Attribute, CandidateRecord } from './types';
import { MAX_COMPARED, MIN_COMPARED } from './state';

export interface ComparisonCell {
  attribute: Attribute;
  label: string;
  value: number;
  /** Highest value for this attribute across the compared candidates. */
  isMax: boolean;
}

export interface ComparisonColumn {
  id: string;
  name: string;
  displayScore: string;
  scoreFull: number;
  level: string;
  tied: boolean;
  cells: ComparisonCell[];
}

export type ComparisonView =
  | { kind: 'prompt'; message: string }
  | { kind: 'table'; columns: ComparisonColumn[] };

export function buildComparison(
  roster: CandidateRecord[],
  selected: string[],
): ComparisonView {
  const chosen = selected
    .map((id) => roster.find((r) => r.id === id))
    .filter((r): r is CandidateRecord => r !== undefined)
    .slice(0, MAX_COMPARED);
  if (chosen.length < MIN_COMPARED) {
    return {
      kind: 'prompt',
      message: `Select at least ${MIN_COMPARED} candidates to compare (up to ${MAX_COMPARED}).`,
    };
  }
  const ordered = [...chosen].sort((a, b) => b.score_full - a.score_full);
  const maxima = new Map<Attribute, number>();
  for (const attribute of ATTRIBUTES) {
    maxima.set(attribute, Math.max(...ordered.map((r) => r.profile[attribute])));
  }
  const columns = ordered.map((record) => ({
    id: record.id,
    name: record.name,
    displayScore: record.score.toFixed(1),
    scoreFull: record.score_full,
    level: record.level,
    tied: ordered.some((o) => o.id !== record.id && o.score_full === record.score_full),
    cells: ATTRIBUTES.map((attribute) => ({
      attribute,
      label: ATTRIBUTE_LABELS[attribute],
      value: record.profile[attribute],
      isMax: record.profile[attribute] === maxima.get(attribute),
    })),
  }));
  return { kind: 'table', columns };
}
