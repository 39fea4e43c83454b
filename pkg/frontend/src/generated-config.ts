// Generated by scripts/gen-config.mjs; do not edit by hand.
export const BUILD_ORIGIN = "http://127.0.0.1:8787";
