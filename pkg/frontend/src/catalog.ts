/**
 * The feature catalog offered in the sidebar. Definitions only — evaluation
 * happens server-side. Mirrors the service's preset features.
 */

import type { FeatureDef } from "./api.js";

export const FEATURE_CATALOG: FeatureDef[] = [
  { name: "all_caps", kind: "all_caps" },
  { name: "dollar", kind: "contains_dollar" },
  { name: "multi_punct", kind: "multi_punct", min_count: 2 },
  { name: "dear_or_mister", kind: "word_list", words: ["dear", "mister"] },
  {
    name: "religious",
    kind: "word_list",
    words: ["almighty", "bless", "blessed", "faith", "god", "pray"],
  },
  {
    name: "dear_or_bless",
    kind: "word_list",
    words: ["almighty", "bless", "dear", "urgent"],
  },
  { name: "contains_re", kind: "substring", pattern: "Re", case_sensitive: true },
  { name: "caps_ratio_gt_half", kind: "caps_majority" },
];

export const FEATURE_NAMES = FEATURE_CATALOG.map((f) => f.name);

export function catalogSubset(names: string[]): FeatureDef[] {
  return FEATURE_CATALOG.filter((f) => names.includes(f.name));
}

/** Ten demo subject lines for one-click exploration. */
export const SAMPLE_CORPUS_CSV = `subject,label
Dear trusted one,spam
From Mrs Kadirat Usman.thanks and remain bless. Urgent please,spam
FBI & IRS seized goods at 99% off! Police Auctions!,spam
Re: PROTECT YOUR COMPUTER AGAINST HARMFUL VIRUSES,spam
Market Internet Access - No Investment Needed,spam
Receipt for your Payment to Edible Twin Cities,non-spam
Your Zappos.com order #: 65801179,non-spam
STEM Education: faculty opening,non-spam
Learning Outcomes working retreat,non-spam
Re: Classifier software design,non-spam
`;

export interface ParsedSubject {
  text: string;
  label: string;
}

/**
 * Minimal CSV parse for the predictions grid (subject + label columns,
 * double-quote escaping). Display plumbing only; the server re-parses the
 * authoritative copy.
 */
export function parseCorpusCsv(csv: string): ParsedSubject[] {
  const rows: string[][] = [];
  let field = "";
  let row: string[] = [];
  let inQuotes = false;
  for (let i = 0; i < csv.length; i++) {
    const ch = csv[i];
    if (inQuotes) {
      if (ch === '"' && csv[i + 1] === '"') {
        field += '"';
        i++;
      } else if (ch === '"') {
        inQuotes = false;
      } else {
        field += ch;
      }
    } else if (ch === '"') {
      inQuotes = true;
    } else if (ch === ",") {
      row.push(field);
      field = "";
    } else if (ch === "\n" || ch === "\r") {
      if (ch === "\r" && csv[i + 1] === "\n") i++;
      row.push(field);
      field = "";
      if (row.some((c) => c !== "")) rows.push(row);
      row = [];
    } else {
      field += ch;
    }
  }
  if (field !== "" || row.length > 0) {
    row.push(field);
    if (row.some((c) => c !== "")) rows.push(row);
  }
  if (rows.length < 2) return [];
  const header = rows[0]!.map((h) => h.trim().toLowerCase());
  const subjectCol = header.indexOf("subject");
  const labelCol = header.indexOf("label");
  if (subjectCol < 0 || labelCol < 0) return [];
  return rows.slice(1).map((r) => ({
    text: r[subjectCol] ?? "",
    label: (r[labelCol] ?? "").trim().toLowerCase(),
  }));
}
