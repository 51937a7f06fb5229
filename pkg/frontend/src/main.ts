import { StripChart } from "./chart.js";
import { PanelConnection, SocketLike } from "./connection.js";
import { Panel } from "./panel.js";

// configuration is limited to the server URL: ?server=ws://host:port/ws
function serverUrl(): string {
  const override = new URLSearchParams(location.search).get("server");
  if (override) return override;
  return `${location.origin.replace(/^http/, "ws")}/ws`;
}

window.addEventListener("load", () => {
  const canvas = document.getElementById("chart") as HTMLCanvasElement;
  const conn = new PanelConnection(
    serverUrl(),
    (url) => new WebSocket(url) as unknown as SocketLike,
  );
  const panel = new Panel(conn, new StripChart(canvas), document);
  panel.start();
});
