import { defineConfig } from 'vitest/config';

export default defineConfig({
  test: {
    environment: 'node',
    globalSetup: ['tests/service.setup.ts'],
    testTimeout: 30000,
    hookTimeout: 60000,
  },
});
