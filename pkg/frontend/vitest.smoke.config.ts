import { defineConfig } from "vitest/config";

// Live smoke: needs the Python service installed (reqintel on PATH).
export default defineConfig({
  test: {
    environment: "node",
    include: ["smoke/**/*.test.ts"],
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
