/** What-if exploration: the marginal score effect of raising each
 * attribute by one training step (one rating point, 10 cm of height),
 * sorted so the biggest win comes first. */

import type { Api } from './api';
import {
  ATTRIBUTES,
  ATTRIBUTE_LABELS,
  HEIGHT_ATTRIBUTE,
  HEIGHT_RANGE,
  RATING_RANGE,
} from './types';
import type { Attribute, Profile } from './types';

export const RATING_STEP = 1;
export const HEIGHT_STEP = 10;

export interface WhatIfDelta {
  attribute: Attribute;
  label: string;
  delta: number;
  /** True when the attribute was already at its maximum. */
  clamped: boolean;
}

export function bumpedProfile(draft: Profile, attribute: Attribute): Profile {
  const max = attribute === HEIGHT_ATTRIBUTE ? HEIGHT_RANGE.max : RATING_RANGE.max;
  const step = attribute === HEIGHT_ATTRIBUTE ? HEIGHT_STEP : RATING_STEP;
  return { ...draft, [attribute]: Math.min(max, draft[attribute] + step) };
}

/** Evaluate the draft plus each single-attribute bump via the service.
 *
 * Attributes already at their maximum are reported with delta 0 without a
 * round trip (the bumped profile would be identical). Results are sorted
 * by delta descending, ties keeping attribute order.
 */
export async function computeWhatIfDeltas(api: Api, draft: Profile): Promise<WhatIfDelta[]> {
  const base = await api.evaluate(draft);
  const deltas: WhatIfDelta[] = [];
  for (const attribute of ATTRIBUTES) {
    const bumped = bumpedProfile(draft, attribute);
    if (bumped[attribute] === draft[attribute]) {
      deltas.push({ attribute, label: ATTRIBUTE_LABELS[attribute], delta: 0, clamped: true });
      continue;
    }
    const result = await api.evaluate(bumped);
    deltas.push({
      attribute,
      label: ATTRIBUTE_LABELS[attribute],
      delta: result.score_full - base.score_full,
      clamped: false,
    });
  }
  return deltas
    .map((d, i) => [d, i] as const)
    .sort(([a, i], [b, j]) => b.delta - a.delta || i - j)
    .map(([d]) => d);
}
