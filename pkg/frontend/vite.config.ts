import { defineConfig } from "vitest/config";

export default defineConfig({
  server: {
    port: 5173,
    proxy: {
      // Forward API calls to the backend during development.
      "/api": "http://127.0.0.1:8000",
    },
  },
  test: {
    environment: "node",
    testTimeout: 120000,
    hookTimeout: 120000,
  },
});
