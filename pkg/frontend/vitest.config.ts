import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    environment: "node",
    // the integration suite drives a real solver process
    testTimeout: 30_000,
    hookTimeout: 60_000,
  },
});
