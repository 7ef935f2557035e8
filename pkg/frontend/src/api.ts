/** Thin service client.  Responses keep their raw text so the geometry the
 * viewer renders stays byte-identical to what the service produced. */

export interface HttpResponse {
  status: number;
  text: string;
}

export type Fetcher = (
  url: string,
  init?: { method?: string; body?: string; headers?: Record<string, string> },
) => Promise<HttpResponse>;

export interface ServiceReply<T> {
  status: number;
  raw: string;
  body: T;
}

export const defaultFetcher: Fetcher = async (url, init) => {
  const response = await fetch(url, init);
  return { status: response.status, text: await response.text() };
};

/** Format a number the way the service expects it in a query string. */
export function queryNumber(value: number): string {
  return String(value);
}

export class ServiceClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetcher: Fetcher = defaultFetcher,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown):
      Promise<ServiceReply<T>> {
    const init: { method: string; body?: string; headers?: Record<string, string> } =
        { method };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
      init.headers = { "content-type": "application/json" };
    }
    const response = await this.fetcher(this.baseUrl + path, init);
    return {
      status: response.status,
      raw: response.text,
      body: JSON.parse(response.text) as T,
    };
  }

  createNet(doc: unknown) {
    return this.request<import("./types.js").CreateResponse
        | import("./types.js").ErrorResponse>("POST", "/api/nets", doc);
  }

  getState(id: string, a: number) {
    return this.request<import("./types.js").GeometryDocument
        | import("./types.js").ErrorResponse>(
      "GET", `/api/nets/${id}?a=${queryNumber(a)}`);
  }

  getFrames(id: string, from: number, to: number, n: number) {
    return this.request<import("./types.js").GeometryDocument[]
        | import("./types.js").ErrorResponse>(
      "GET",
      `/api/nets/${id}/frames?from=${queryNumber(from)}&to=${queryNumber(to)}&n=${n}`);
  }

  makeParallel(id: string, rowScales: number[], colScales: number[]) {
    return this.request<import("./types.js").ParallelResponse
        | import("./types.js").ErrorResponse>(
      "POST", `/api/nets/${id}/parallel`,
      { row_scales: rowScales, col_scales: colScales });
  }

  validate(id: string, a: number) {
    return this.request<import("./types.js").ReportDocument
        | import("./types.js").ErrorResponse>(
      "GET", `/api/nets/${id}/validate?a=${queryNumber(a)}`);
  }
}
