import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environmentOptions: {
      // The DOM tests inject index.html verbatim; don't fetch its assets.
      happyDOM: {
        settings: {
          disableCSSFileLoading: true,
          disableJavaScriptFileLoading: true,
        },
      },
    },
  },
});
