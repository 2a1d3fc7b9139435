import { defineConfig } from "vitest/config";

// The explorer is served as static assets; during development, API calls are
// proxied to a locally running `matra serve`.
export default defineConfig({
  server: {
    proxy: {
      "/model": "http://127.0.0.1:8787",
      "/scenarios": "http://127.0.0.1:8787",
      "/assess": "http://127.0.0.1:8787",
      "/whatif": "http://127.0.0.1:8787",
    },
  },
  test: {
    environment: "node",
    include: ["src/**/*.test.ts"],
    testTimeout: 30000,
  },
});
