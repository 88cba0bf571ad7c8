#include "qtails/report.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "qtails/errors.hpp"

namespace qtails::report {

using registry::Status;
using registry::Summary;
using registry::VerificationReport;

Format parse_format(std::string_view name)
{
    if (name == "text") return Format::text;
    if (name == "json") return Format::json;
    if (name == "csv") return Format::csv;
    if (name == "markdown" || name == "md") return Format::markdown;
    throw DomainError("unknown format: " + std::string(name));
}

std::string rational_string(const Rational &r)
{
    mpq_class c(r);
    c.canonicalize();
    return c.get_str();
}

namespace {

double round_ms(double ms) { return std::round(ms * 1000.0) / 1000.0; }

std::string caps_string(const VerificationReport &r)
{
    if (r.caps.empty()) {
        return "-";
    }
    std::string s;
    for (const auto &[name, cap] : r.caps) {
        if (!s.empty()) {
            s += ';';
        }
        s += name + "=" + std::to_string(cap);
    }
    return s;
}

std::string ms_string(double ms)
{
    std::ostringstream os;
    os << std::fixed << std::setprecision(1) << ms << "ms";
    return os.str();
}

std::string csv_field(const std::string &s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') {
            out += '"';
        }
        out += ch;
    }
    return out + "\"";
}

std::string md_cell(const std::string &s)
{
    std::string out;
    for (char ch : s) {
        if (ch == '|') {
            out += '\\';
        }
        out += ch;
    }
    return out;
}

std::string status_upper(Status s)
{
    switch (s) {
    case Status::pass: return "PASS";
    case Status::fail: return "FAIL";
    case Status::error: return "ERROR";
    }
    return "?";
}

std::string counts_line(const Summary &s)
{
    return std::to_string(s.total()) + " entries: " + std::to_string(s.passed) + " passed, " +
           std::to_string(s.failed) + " failed, " + std::to_string(s.errors) + " errors";
}

} // namespace

nlohmann::ordered_json to_json(const VerificationReport &r)
{
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["paper_ref"] = r.reference;
    j["mode"] = std::string(registry::to_string(r.mode));
    j["order"] = r.order;
    j["caps"] = nlohmann::ordered_json::object();
    for (const auto &[name, cap] : r.caps) {
        j["caps"][name] = cap;
    }
    j["status"] = std::string(registry::to_string(r.status));
    if (r.first_mismatch) {
        j["first_mismatch"] = {{"q_order", r.first_mismatch->q_order},
                               {"monomial", r.first_mismatch->monomial},
                               {"lhs", r.first_mismatch->lhs},
                               {"rhs", r.first_mismatch->rhs}};
    } else {
        j["first_mismatch"] = nullptr;
    }
    j["elapsed_ms"] = round_ms(r.elapsed_ms);
    j["message"] = r.message;
    auto seq = nlohmann::ordered_json::array();
    for (const auto &c : r.sequence) {
        seq.push_back(rational_string(c));
    }
    j["sequence"] = seq;
    return j;
}

nlohmann::ordered_json to_json(const Summary &s)
{
    nlohmann::ordered_json j;
    j["summary"] = {{"total", s.total()},
                    {"passed", s.passed},
                    {"failed", s.failed},
                    {"errors", s.errors},
                    {"elapsed_ms", round_ms(s.elapsed_ms)}};
    auto arr = nlohmann::ordered_json::array();
    for (const auto &r : s.reports) {
        arr.push_back(to_json(r));
    }
    j["reports"] = arr;
    return j;
}

std::string render(const Summary &s, Format f, bool timing)
{
    std::ostringstream os;
    switch (f) {
    case Format::json:
        os << to_json(s).dump(2) << '\n';
        break;
    case Format::text:
        for (const auto &r : s.reports) {
            os << std::left << std::setw(6) << status_upper(r.status) << std::setw(8) << r.id << "order="
               << r.order << " caps=" << caps_string(r);
            if (timing) {
                os << ' ' << ms_string(r.elapsed_ms);
            }
            os << '\n';
            if (r.first_mismatch) {
                const auto &m = *r.first_mismatch;
                os << "      first mismatch at q^" << m.q_order << " [" << m.monomial << "]: " << m.lhs << " vs "
                   << m.rhs << '\n';
            }
            if (!r.message.empty()) {
                os << "      " << r.message << '\n';
            }
        }
        os << counts_line(s);
        if (timing) {
            os << " in " << ms_string(s.elapsed_ms);
        }
        os << '\n';
        break;
    case Format::csv:
        os << "id,paper_ref,mode,order,caps,status,q_order,monomial,lhs,rhs,message";
        os << (timing ? ",elapsed_ms\n" : "\n");
        for (const auto &r : s.reports) {
            os << csv_field(r.id) << ',' << csv_field(r.reference) << ',' << registry::to_string(r.mode) << ','
               << r.order << ',' << csv_field(caps_string(r)) << ',' << registry::to_string(r.status) << ',';
            if (r.first_mismatch) {
                const auto &m = *r.first_mismatch;
                os << m.q_order << ',' << csv_field(m.monomial) << ',' << csv_field(m.lhs) << ','
                   << csv_field(m.rhs);
            } else {
                os << ",,,";
            }
            os << ',' << csv_field(r.message);
            if (timing) {
                os << ',' << std::fixed << std::setprecision(3) << r.elapsed_ms;
            }
            os << '\n';
        }
        break;
    case Format::markdown:
        os << "# Identity verification report\n\n";
        os << counts_line(s);
        if (timing) {
            os << " in " << ms_string(s.elapsed_ms);
        }
        os << ".\n\n";
        os << "| id | identity | mode | order | caps | status |" << (timing ? " time |" : "") << " first mismatch |\n";
        os << "|---|---|---|---|---|---|" << (timing ? "---|" : "") << "---|\n";
        for (const auto &r : s.reports) {
            os << "| " << r.id << " | " << md_cell(r.reference) << " | " << registry::to_string(r.mode) << " | "
               << r.order << " | " << caps_string(r) << " | " << registry::to_string(r.status) << " |";
            if (timing) {
                os << ' ' << ms_string(r.elapsed_ms) << " |";
            }
            if (r.first_mismatch) {
                const auto &m = *r.first_mismatch;
                os << " q^" << m.q_order << " [" << md_cell(m.monomial) << "]: " << md_cell(m.lhs) << " vs "
                   << md_cell(m.rhs);
            } else if (r.status == Status::error) {
                os << ' ' << md_cell(r.message);
            }
            os << " |\n";
        }
        break;
    }
    return os.str();
}

} // namespace qtails::report
