// Entry point. Query parameters tune the deployment: ?api=URL points the
// client at a service on another origin, ?inactivity=SECONDS adjusts the
// idle-hint timeout (default 120).

import { ApiClient } from "./api.js";
import { DEFAULT_TIMEOUT_MS } from "./inactivity.js";
import { App } from "./ui.js";

const params = new URLSearchParams(window.location.search);
const apiBase = params.get("api") ?? "";
const inactivitySeconds = Number(params.get("inactivity"));
const inactivityMs =
  Number.isFinite(inactivitySeconds) && inactivitySeconds > 0
    ? inactivitySeconds * 1000
    : DEFAULT_TIMEOUT_MS;

const root = document.getElementById("app");
if (root) {
  const app = new App(root, new ApiClient(apiBase), inactivityMs);
  void app.boot();
}
