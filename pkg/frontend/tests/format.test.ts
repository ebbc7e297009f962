import { describe, expect, it } from 'vitest';

import { formatDelta, formatScore, levelColor, levelOrdinal } from '../src/format';
import { LEVELS } from '../src/types';

describe('formatting', () => {
  it('scores render with exactly one decimal', () => {
    expect(formatScore({ score: 66.1 })).toBe('66.1');
    expect(formatScore({ score: 50 })).toBe('50.0');
  });

  it('deltas carry an explicit sign', () => {
    expect(formatDelta(2.24)).toBe('+2.2');
    expect(formatDelta(-0.5)).toBe('-0.5');
    expect(formatDelta(0)).toBe('0.0');
  });

  it('level ordinals follow the nine-step scale', () => {
    expect(levelOrdinal('Awful')).toBe(0);
    expect(levelOrdinal('Ordinary')).toBe(4);
    expect(levelOrdinal('Excellent')).toBe(8);
  });

  it('badge colors run red to green with ordinal', () => {
    expect(levelColor('Awful')).toBe('hsl(0, 70%, 42%)');
    expect(levelColor('Excellent')).toBe('hsl(120, 70%, 42%)');
    for (const level of LEVELS) {
      expect(levelColor(level)).toMatch(/^hsl\(\d+, 70%, 42%\)$/);
    }
  });
});
