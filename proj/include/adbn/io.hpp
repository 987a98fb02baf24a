#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adbn/learning.hpp"
#include "adbn/network.hpp"
#include "adbn/validate.hpp"

namespace adbn {

struct IoIssue {
    std::string where;  // JSON path or "line N"
    std::string message;
};

std::string format_issues(const std::vector<IoIssue>& issues);

struct NetworkParseResult {
    std::optional<Network> network;     // set only when parsing succeeded
    std::vector<IoIssue> errors;        // syntax / schema errors
    ValidationReport validation;        // semantic check of the parsed net

    bool ok() const { return network.has_value() && errors.empty() && validation.ok(); }
};

/// Parses and validates a network document (strict: unknown fields rejected).
NetworkParseResult parse_network(const std::string& text, const Options& opts = {});

/// Canonical serialization: keys sorted, numbers at 17 significant digits,
/// rows and parameters in index order. parse(serialize(net)) == net and the
/// output is byte-stable under re-serialization.
std::string serialize_network(const Network& net);

/// One case per line of a case stream.
struct CaseEntry {
    std::string id;
    CaseRecord record;

    bool operator==(const CaseEntry&) const = default;
};

struct CaseParseResult {
    std::vector<CaseEntry> cases;
    std::vector<IoIssue> errors;

    bool ok() const { return errors.empty(); }
};

/// Line-delimited case records; variable and state names resolve against the
/// network, duplicate ids are rejected.
CaseParseResult parse_cases(const std::string& text, const Network& net);

std::string serialize_cases(const std::vector<CaseEntry>& cases, const Network& net);

/// Line-delimited learning report: a header line followed by one record per
/// case with evidence probability, per-parameter deltas, clamp flags and the
/// covariance diagnostic. Rejected cases carry an error marker and no deltas.
std::string write_report(const std::vector<CaseReport>& reports, const Network& net);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace adbn
