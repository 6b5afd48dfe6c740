// Browser geolocation with graceful denial: an SOS goes out without
// coordinates when permission is refused or capture times out.

export interface CapturedLocation {
  lat: number;
  lon: number;
  accuracy_m?: number;
}

export function captureLocation(
  geolocation: Geolocation | undefined,
  timeoutMs = 5000,
): Promise<CapturedLocation | null> {
  if (!geolocation) return Promise.resolve(null);
  return new Promise((resolve) => {
    let settled = false;
    const finish = (value: CapturedLocation | null) => {
      if (!settled) {
        settled = true;
        resolve(value);
      }
    };
    const timer = setTimeout(() => finish(null), timeoutMs);
    geolocation.getCurrentPosition(
      (position) => {
        clearTimeout(timer);
        finish({
          lat: position.coords.latitude,
          lon: position.coords.longitude,
          accuracy_m: position.coords.accuracy ?? undefined,
        });
      },
      () => {
        clearTimeout(timer);
        finish(null);
      },
      { enableHighAccuracy: true, timeout: timeoutMs },
    );
  });
}
