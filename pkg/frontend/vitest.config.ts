import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["test/**/*.test.ts"],
    // the round-trip tests spawn the python service and run a real
    // WebSocket against it, so they need room beyond the default 5 s
    testTimeout: 30_000,
    hookTimeout: 30_000,
  },
});
