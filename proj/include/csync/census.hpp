#ifndef CSYNC_CENSUS_HPP
#define CSYNC_CENSUS_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "csync/automata.hpp"
#include "csync/rules.hpp"

namespace csync {

struct EnumerateOptions {
    // Only F = {n}; otherwise every subset of states is a final set.
    bool normalize_final = false;
    // Keep one automaton per orbit of letter permutations.
    bool quotient_letter_perm = false;
};

// (n+1)^(n·k) transition patterns.
std::size_t transition_pattern_count(int n, int k);

// All PDFAs over {1..n} and the standard k-letter alphabet, initial state
// 1, in a fixed order. n, k ≤ 3.
std::vector<Pdfa> enumerate_pdfas(int n, int k, const EnumerateOptions& opts = {});

// Fixed-width text encoding: transition targets state by state, letter
// by letter, then the final set. Sorting by it gives the report order.
std::string census_encoding(const Pdfa& b);

struct CensusRecord {
    std::string encoding;
    Pdfa automaton;
    std::string verdict;  // Verdict::summary()
    Lower lower = Lower::NoBound;
    Upper upper = Upper::PSPACE;
    std::string digest;  // nested certificate kinds
    int scc_count = 0;   // of the trimmed automaton
};

struct CensusConfig {
    EnumerateOptions enumerate;
    ClassifyConfig classify;
    int jobs = 1;
};

struct CensusReport {
    int states = 0;
    int alphabet = 0;
    EnumerateOptions options;
    std::size_t total = 0;
    std::map<std::string, std::size_t> counts;  // "P", "NP-complete", "PSPACE-complete", "unresolved"
    std::vector<CensusRecord> records;          // sorted by encoding
    std::vector<CensusRecord> unresolved;
    std::vector<std::string> violations;
};

// Classifies every enumerated automaton. Raises EngineError, with the
// offending automaton in the message, on a three-state consistency
// violation.
CensusReport run_census(int n, int k, const CensusConfig& cfg = {});

std::string certificate_digest(const Certificate& c);
std::string census_summary(const CensusReport& r);
// One JSON object per line, one line per automaton.
std::string census_records_jsonl(const CensusReport& r);

}  // namespace csync

#endif
