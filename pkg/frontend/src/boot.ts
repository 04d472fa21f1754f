/** Browser entry point. The API base defaults to the page origin and can be
 * overridden with ?api=http://host:port for a separately served backend. */

import { ApiClient } from "./api.js";
import { bootstrap } from "./main.js";

const params = new URLSearchParams(location.search);
const base = params.get("api") ?? "";
const root = document.getElementById("app");
if (root) {
  bootstrap(root, new ApiClient(base));
}
