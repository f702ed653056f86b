import { ServiceClient } from "./api.js";
import { createApp } from "./app.js";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");

// Served by `spamlab serve`, so the API shares our origin.
createApp(root, new ServiceClient(""));
