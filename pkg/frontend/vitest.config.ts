import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    globals: true,
    environment: "node",
    include: ["tests/**/*.test.ts"],
    globalSetup: ["scripts/globalSetup.ts"],
    testTimeout: 30_000,
    hookTimeout: 120_000,
  },
});
