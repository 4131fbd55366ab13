#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "otsim/harness.hpp"

namespace otsim {

std::string format_number(double value)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

namespace {

std::string json_rate(const std::optional<RateEstimate>& r)
{
    if (!r) return "null";
    return format_number(r->value);
}

std::string json_ci(const std::optional<RateEstimate>& r)
{
    if (!r) return "null";
    return "[" + format_number(r->ci.lo) + ", " + format_number(r->ci.hi) + "]";
}

std::string json_family_rate(const std::optional<RateEstimate>& r)
{
    if (!r) return "null";
    return "{\"value\": " + format_number(r->value) + ", \"ci\": " + json_ci(r) + "}";
}

std::string json_optional(const std::optional<double>& v)
{
    return v ? format_number(*v) : "null";
}

// Output paths are echoed verbatim; escape what JSON requires.
std::string json_string(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    return out + "\"";
}

std::string format_name(OutputFormat f)
{
    return f == OutputFormat::Json ? "json" : "csv";
}

std::string emit_json(const RunStats& s)
{
    const auto& c = s.config;
    const auto& p = c.params;
    std::ostringstream o;
    o << "{\n";
    o << "  \"config\": {"
      << "\"mode\": \"" << to_string(p.mode) << "\", "
      << "\"beta\": " << format_number(p.beta.value()) << ", "
      << "\"n\": " << p.n_states << ", "
      << "\"test_frac\": " << format_number(p.test_fraction) << ", "
      << "\"set_size\": " << p.set_size << ", "
      << "\"trials\": " << c.trials << ", "
      << "\"format\": \"" << format_name(c.output_format) << "\", "
      << "\"out\": " << (c.output_path ? json_string(*c.output_path) : "null") << ", "
      << "\"p_prime_given_e1\": " << format_number(prime_given_e1(p.beta)) << ", "
      << "\"p_prime_given_e0\": " << format_number(prime_given_e0(p.beta)) << "},\n";
    o << "  \"seed\": " << p.seed << ",\n";
    o << "  \"trials_completed\": " << s.trials_completed << ",\n";
    o << "  \"retried_sessions\": " << s.retried_sessions << ",\n";
    o << "  \"abort_rate\": " << format_number(s.abort_rate.value) << ",\n";
    o << "  \"abort_rate_ci\": [" << format_number(s.abort_rate.ci.lo) << ", "
      << format_number(s.abort_rate.ci.hi) << "],\n";
    o << "  \"guess_accuracy\": " << json_rate(s.guess_accuracy) << ",\n";
    o << "  \"guess_accuracy_ci\": " << json_ci(s.guess_accuracy) << ",\n";
    o << "  \"e1_freq_honest\": " << json_family_rate(s.e1_honest) << ",\n";
    o << "  \"e1_freq_prime\": " << json_family_rate(s.e1_prime) << ",\n";
    o << "  \"e1_freq_double_prime\": " << json_family_rate(s.e1_double_prime) << ",\n";
    o << "  \"prime_fraction_rc\": " << json_optional(s.prime_fraction_rc) << ",\n";
    o << "  \"prime_fraction_other\": " << json_optional(s.prime_fraction_other) << "\n";
    o << "}\n";
    return o.str();
}

void csv_rate(std::ostringstream& o, const std::optional<RateEstimate>& r)
{
    if (r) {
        o << ',' << format_number(r->value) << ',' << format_number(r->ci.lo) << ','
          << format_number(r->ci.hi);
    } else {
        o << ",,,";
    }
}

std::string emit_csv(const RunStats& s)
{
    const auto& p = s.config.params;
    std::ostringstream o;
    o << "mode,beta,n,test_frac,set_size,trials,seed,trials_completed,retried_sessions,"
         "abort_rate,abort_rate_lo,abort_rate_hi,"
         "guess_accuracy,guess_accuracy_lo,guess_accuracy_hi,"
         "e1_freq_honest,e1_freq_honest_lo,e1_freq_honest_hi,"
         "e1_freq_prime,e1_freq_prime_lo,e1_freq_prime_hi,"
         "e1_freq_double_prime,e1_freq_double_prime_lo,e1_freq_double_prime_hi,"
         "prime_fraction_rc,prime_fraction_other\n";
    o << to_string(p.mode) << ',' << format_number(p.beta.value()) << ',' << p.n_states << ','
      << format_number(p.test_fraction) << ',' << p.set_size << ',' << s.config.trials << ','
      << p.seed << ',' << s.trials_completed << ',' << s.retried_sessions;
    csv_rate(o, s.abort_rate);
    csv_rate(o, s.guess_accuracy);
    csv_rate(o, s.e1_honest);
    csv_rate(o, s.e1_prime);
    csv_rate(o, s.e1_double_prime);
    o << ',' << (s.prime_fraction_rc ? format_number(*s.prime_fraction_rc) : "") << ','
      << (s.prime_fraction_other ? format_number(*s.prime_fraction_other) : "") << '\n';
    return o.str();
}

}  // namespace

std::string emit_report(const RunStats& stats, OutputFormat format)
{
    return format == OutputFormat::Json ? emit_json(stats) : emit_csv(stats);
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace otsim
