import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "node",
    hookTimeout: 60_000,
    testTimeout: 60_000,
    // the two suites spawn their own service instances; run files serially
    fileParallelism: false,
  },
});
