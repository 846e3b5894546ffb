import { WikiClient } from "./api.js";
import { mountApp } from "./app.js";

const app = mountApp(document, new WikiClient());

function fromHash(): void {
  const name = decodeURIComponent(location.hash.replace(/^#/, ""));
  if (name) app.open(name);
}

window.addEventListener("hashchange", fromHash);
if (location.hash) {
  fromHash();
} else {
  app.open("FrontPage");
}
