#pragma once

#include <string>

#include <json.hpp>

namespace gca {

using json = nlohmann::ordered_json;

// An analysis report: a single ordered document rendered either as JSON or
// as indented text. Rendering is locale-independent and byte-deterministic;
// every float prints with 15 significant digits. Non-finite numbers are a
// programming error (divergence is represented structurally) and throw.
struct Report {
    json doc = json::object();

    std::string to_json() const;
    std::string to_text() const;
};

// Every report starts with a "command" key so the echo lands first even
// though the CLI fills it in last.
Report make_report();
void set_command(Report& r, const std::string& command);

}  // namespace gca
