#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mathdup {

// Every failure surfaced by the library derives from Error. The kind() string
// is stable and is what the CLI and the HTTP layer report to callers.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& detail)
        : std::runtime_error(kind + ": " + detail), kind_(std::move(kind)), detail_(detail) {}

    const std::string& kind() const noexcept { return kind_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string kind_;
    std::string detail_;
};

#define MATHDUP_ERROR(Name)                                                    \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& detail) : Error(#Name, detail) {}     \
    }

MATHDUP_ERROR(MalformedInput);
MATHDUP_ERROR(InvariantViolation);
MATHDUP_ERROR(UnresolvedDocument);
MATHDUP_ERROR(EmptyCorpus);
MATHDUP_ERROR(UnsupportedField);
MATHDUP_ERROR(MalformedTree);
MATHDUP_ERROR(DuplicateDocId);
MATHDUP_ERROR(EmptyIndex);
MATHDUP_ERROR(UnknownDocId);
MATHDUP_ERROR(InvalidThresholds);
MATHDUP_ERROR(StorageUnavailable);
MATHDUP_ERROR(VerdictConflict);
MATHDUP_ERROR(InvalidVerdict);

#undef MATHDUP_ERROR

// Query syntax error. offset is a byte offset into the query text.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& detail)
        : Error("ParseError", detail + " at offset " + std::to_string(offset)),
          offset_(offset), expected_(std::move(expected)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

}  // namespace mathdup
