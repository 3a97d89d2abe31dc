/** User identity and API base URL.
 *
 * The API base can be set three ways, strongest first:
 *   1. window.FORECASTKG_API  (runtime, e.g. injected by the host page)
 *   2. localStorage "forecastkg.apiBase"  (settings page)
 *   3. "" — same origin as the static files.
 */

declare global {
  interface Window {
    FORECASTKG_API?: string;
  }
}

const USER_KEY = "forecastkg.user";
const API_KEY = "forecastkg.apiBase";
const DEFAULT_USER = "planner";

function storage(): Storage | null {
  try {
    return typeof localStorage === "undefined" ? null : localStorage;
  } catch {
    return null;
  }
}

export function apiBase(): string {
  if (typeof window !== "undefined" && window.FORECASTKG_API) {
    return window.FORECASTKG_API;
  }
  return storage()?.getItem(API_KEY) ?? "";
}

export function setApiBase(base: string): void {
  storage()?.setItem(API_KEY, base);
}

export function userName(): string {
  const stored = storage()?.getItem(USER_KEY);
  return stored && stored.length > 0 ? stored : DEFAULT_USER;
}

export function setUserName(name: string): void {
  storage()?.setItem(USER_KEY, name);
}
