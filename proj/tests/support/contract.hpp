#pragma once

#include <string>
#include <vector>

#include "mathdup/document.hpp"

namespace mathdup::testing {

// Two documents sharing one copied block, text jaccard in (0.12, 0.20]
// under default settings: a text warning but not suspicious.
std::pair<Document, Document> warning_text_pair();

// Small corpus: a seeded benchmark plus the pair above.
std::vector<Document> service_corpus();

struct ContractResult {
    std::size_t checks = 0;
    std::vector<std::string> failures;
};

// Runs the HTTP contract suite against a server on an ephemeral port:
// every endpoint, every response validated against docs/schema, error
// envelopes and status codes, and a threshold change that must leave
// report scores byte-identical.
ContractResult run_service_contract();

}  // namespace mathdup::testing
