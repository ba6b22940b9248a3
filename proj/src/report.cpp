#include "report.hpp"

#include <cmath>
#include <cstdio>

#include "errors.hpp"
#include "util.hpp"

namespace gca {

namespace {

void escape_string(const std::string& s, std::string& out) {
    out += '"';
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += char(c);
                }
        }
    }
    out += '"';
}

void emit_number(const json& j, std::string& out) {
    if (j.is_number_float()) {
        double x = j.get<double>();
        if (!std::isfinite(x))
            throw invalid_argument("reports carry no non-finite numbers; "
                                   "divergence must be structural");
        out += fmt15(x);
    } else if (j.is_number_unsigned()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%llu",
                      static_cast<unsigned long long>(j.get<std::uint64_t>()));
        out += buf;
    } else {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%lld",
                      static_cast<long long>(j.get<std::int64_t>()));
        out += buf;
    }
}

void emit_json(const json& j, int indent, std::string& out) {
    const std::string pad(std::size_t(indent) * 2, ' ');
    const std::string pad_in(std::size_t(indent + 1) * 2, ' ');
    if (j.is_object()) {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ",\n";
            first = false;
            out += pad_in;
            escape_string(it.key(), out);
            out += ": ";
            emit_json(it.value(), indent + 1, out);
        }
        out += "\n" + pad + "}";
    } else if (j.is_array()) {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        bool first = true;
        for (const auto& v : j) {
            if (!first) out += ",\n";
            first = false;
            out += pad_in;
            emit_json(v, indent + 1, out);
        }
        out += "\n" + pad + "]";
    } else if (j.is_string()) {
        escape_string(j.get<std::string>(), out);
    } else if (j.is_boolean()) {
        out += j.get<bool>() ? "true" : "false";
    } else if (j.is_null()) {
        out += "null";
    } else {
        emit_number(j, out);
    }
}

void emit_text(const json& j, int indent, std::string& out) {
    const std::string pad(std::size_t(indent) * 2, ' ');
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const json& v = it.value();
            if (v.is_object() || (v.is_array() && !v.empty() &&
                                  (v.front().is_object() || v.front().is_array()))) {
                out += pad + it.key() + ":\n";
                emit_text(v, indent + 1, out);
            } else if (v.is_array()) {
                if (v.empty()) {
                    out += pad + it.key() + ": (none)\n";
                } else {
                    out += pad + it.key() + ":\n";
                    emit_text(v, indent + 1, out);
                }
            } else {
                out += pad + it.key() + ": ";
                emit_text(v, 0, out);
            }
        }
    } else if (j.is_array()) {
        for (const auto& v : j) {
            if (v.is_object() || v.is_array()) {
                out += pad + "-\n";
                emit_text(v, indent + 1, out);
            } else {
                out += pad + "- ";
                emit_text(v, 0, out);
            }
        }
    } else if (j.is_string()) {
        out += j.get<std::string>() + "\n";
    } else if (j.is_boolean()) {
        out += j.get<bool>() ? "true\n" : "false\n";
    } else if (j.is_null()) {
        out += "null\n";
    } else {
        emit_number(j, out);
        out += "\n";
    }
}

}  // namespace

std::string Report::to_json() const {
    std::string out;
    emit_json(doc, 0, out);
    out += "\n";
    return out;
}

std::string Report::to_text() const {
    std::string out;
    emit_text(doc, 0, out);
    return out;
}

Report make_report() {
    Report r;
    r.doc["command"] = "";
    return r;
}

void set_command(Report& r, const std::string& command) {
    r.doc["command"] = command;
}

}  // namespace gca
