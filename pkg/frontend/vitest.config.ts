import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    // The end-to-end test boots the Python service, which takes a moment.
    testTimeout: 60000,
    hookTimeout: 60000,
  },
});
