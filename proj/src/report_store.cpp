#include "curvlab/report_store.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

#include "curvlab/error.hpp"
#include "curvlab/format.hpp"
#include "curvlab/verify.hpp"

#ifndef CURVLAB_VERSION
#define CURVLAB_VERSION "0.0.0"
#endif

namespace curvlab::store {

namespace fs = std::filesystem;

namespace {

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::IoError, "SHA-256 failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < length; ++i) {
        out += kHex[digest[i] >> 4];
        out += kHex[digest[i] & 0xf];
    }
    return out;
}

std::string now_utc() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

void append_block(std::ostringstream& out, const std::string& header, const std::string& text) {
    const std::vector<std::string> lines = split_lines(text);
    // A final line without '\n' is marked so the text round-trips exactly.
    const bool open = !text.empty() && text.back() != '\n';
    out << header << " lines=" << lines.size() << (open ? " noeol" : "") << '\n';
    for (const std::string& l : lines) out << l << '\n';
}

class Reader {
public:
    explicit Reader(const std::string& text) : lines_(split_lines(text)) {}

    bool done() const { return pos_ >= lines_.size(); }

    std::string next() {
        if (done()) throw Error(ErrorCode::SchemaMismatch, "record truncated");
        return lines_[pos_++];
    }

    std::string value(const std::string& key) {
        const std::string line = next();
        if (line.rfind(key + "=", 0) != 0) throw Error(ErrorCode::SchemaMismatch, "expected " + key + "=");
        return line.substr(key.size() + 1);
    }

    // "<prefix> lines=N" then N lines; returns the text between.
    std::string block(const std::string& header_line, const std::string& prefix, std::string* rest) {
        const auto at = header_line.rfind(" lines=");
        if (header_line.rfind(prefix, 0) != 0 || at == std::string::npos) {
            throw Error(ErrorCode::SchemaMismatch, "malformed block header '" + header_line + "'");
        }
        if (rest) *rest = header_line.substr(prefix.size(), at - prefix.size());
        std::size_t count = 0;
        std::string digits = header_line.substr(at + 7);
        const bool open = digits.size() > 6 && digits.compare(digits.size() - 6, 6, " noeol") == 0;
        if (open) digits.resize(digits.size() - 6);
        try {
            std::size_t used = 0;
            count = std::stoul(digits, &used);
            if (used != digits.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw Error(ErrorCode::SchemaMismatch, "malformed line count");
        }
        std::string text;
        for (std::size_t i = 0; i < count; ++i) text += next() + '\n';
        if (open && !text.empty()) text.pop_back();
        return text;
    }

private:
    std::vector<std::string> lines_;
    std::size_t pos_ = 0;
};

std::string read_file(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + file.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

bool same_content(const RunRecord& a, const RunRecord& b) {
    if (a.run_id != b.run_id || a.config_echo != b.config_echo || a.reports.size() != b.reports.size()) return false;
    for (std::size_t i = 0; i < a.reports.size(); ++i) {
        if (a.reports[i].kind != b.reports[i].kind || a.reports[i].text != b.reports[i].text) return false;
    }
    return true;
}

std::map<std::string, double> mass_summary(const std::string& text) {
    std::map<std::string, double> out;
    for (const std::string& line : split_lines(text)) {
        if (line.rfind("# ", 0) != 0) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string value = line.substr(eq + 1);
        char* end = nullptr;
        const double v = std::strtod(value.c_str(), &end);
        if (end != value.c_str() && *end == '\0') out[line.substr(2, eq - 2)] = v;
    }
    return out;
}

bool differs(double a, double b) { return !(a == b || (std::isnan(a) && std::isnan(b))); }

void diff_verification(std::ostringstream& out, const std::string& a_text, const std::string& b_text) {
    const verify::VerificationReport a = verify::parse_report_text(a_text);
    const verify::VerificationReport b = verify::parse_report_text(b_text);
    bool same_list = a.checks.size() == b.checks.size();
    for (std::size_t i = 0; same_list && i < a.checks.size(); ++i) same_list = a.checks[i].name == b.checks[i].name;
    if (!same_list) throw Error(ErrorCode::SchemaMismatch, "check lists differ");
    for (std::size_t i = 0; i < a.checks.size(); ++i) {
        const verify::CheckResult& x = a.checks[i];
        const verify::CheckResult& y = b.checks[i];
        if (x.status != y.status) {
            out << x.name << " status " << verify::to_string(x.status) << " -> " << verify::to_string(y.status)
                << '\n';
        }
        if (differs(x.worst_margin, y.worst_margin)) {
            out << x.name << " margin " << format_double(x.worst_margin) << " -> " << format_double(y.worst_margin)
                << " delta " << format_double(y.worst_margin - x.worst_margin) << '\n';
        }
    }
}

void diff_mass(std::ostringstream& out, const std::string& a_text, const std::string& b_text) {
    const auto a = mass_summary(a_text);
    const auto b = mass_summary(b_text);
    for (const auto& [key, x] : a) {
        const auto it = b.find(key);
        if (it == b.end()) throw Error(ErrorCode::SchemaMismatch, "mass summary lacks " + key);
        if (differs(x, it->second)) {
            out << key << ' ' << format_double(x) << " -> " << format_double(it->second) << " delta "
                << format_double(it->second - x) << '\n';
        }
    }
    if (a.size() != b.size()) throw Error(ErrorCode::SchemaMismatch, "mass summaries differ in keys");
}

}  // namespace

std::string_view version() { return CURVLAB_VERSION; }

std::string run_id_for(const std::string& config_echo, std::string_view code_version) {
    return sha256_hex(config_echo + '\n' + std::string(code_version)).substr(0, 16);
}

RunRecord make_record(std::string config_echo, std::vector<Payload> reports) {
    RunRecord r;
    r.run_id = run_id_for(config_echo);
    r.created_at = now_utc();
    r.config_echo = std::move(config_echo);
    r.reports = std::move(reports);
    return r;
}

std::string serialize(const RunRecord& record) {
    std::ostringstream out;
    out << "schema=1\n";
    out << "run_id=" << record.run_id << '\n';
    out << "created_at=" << record.created_at << '\n';
    append_block(out, "config", record.config_echo);
    out << "payloads=" << record.reports.size() << '\n';
    for (const Payload& p : record.reports) append_block(out, "payload " + p.kind, p.text);
    return out.str();
}

RunRecord deserialize(const std::string& text) {
    Reader in(text);
    if (in.done() || in.next() != "schema=1") throw Error(ErrorCode::SchemaMismatch, "missing schema=1 header");
    RunRecord r;
    r.run_id = in.value("run_id");
    r.created_at = in.value("created_at");
    r.config_echo = in.block(in.next(), "config", nullptr);
    const std::string count_text = in.value("payloads");
    std::size_t count = 0;
    try {
        count = std::stoul(count_text);
    } catch (const std::exception&) {
        throw Error(ErrorCode::SchemaMismatch, "malformed payload count");
    }
    for (std::size_t i = 0; i < count; ++i) {
        Payload p;
        p.text = in.block(in.next(), "payload ", &p.kind);
        r.reports.push_back(std::move(p));
    }
    if (!in.done()) throw Error(ErrorCode::SchemaMismatch, "trailing content after payloads");
    return r;
}

fs::path save(const RunRecord& record, const fs::path& dir) {
    if (record.run_id.empty()) throw Error(ErrorCode::InvalidInput, "record has no run id");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
    const fs::path target = dir / (record.run_id + ".run");

    if (fs::exists(target)) {
        RunRecord existing;
        try {
            existing = load(target);
        } catch (const Error& e) {
            throw Error(ErrorCode::IoError, target.string() + " exists but is unreadable (" + e.what() + ")");
        }
        if (!same_content(existing, record)) {
            throw Error(ErrorCode::IoError, target.string() + " exists with different content");
        }
        return target;
    }

    const fs::path temp = dir / ("." + record.run_id + ".tmp");
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoError, "cannot write " + temp.string());
        out << serialize(record);
        out.flush();
        if (!out) throw Error(ErrorCode::IoError, "write failed for " + temp.string());
    }
    fs::rename(temp, target, ec);
    if (ec) {
        fs::remove(temp);
        throw Error(ErrorCode::IoError, "cannot rename into " + target.string() + ": " + ec.message());
    }
    return target;
}

RunRecord load(const fs::path& file) { return deserialize(read_file(file)); }

std::string diff(const RunRecord& a, const RunRecord& b) {
    if (a.reports.size() != b.reports.size()) throw Error(ErrorCode::SchemaMismatch, "payload counts differ");
    std::ostringstream out;
    for (std::size_t i = 0; i < a.reports.size(); ++i) {
        if (a.reports[i].kind != b.reports[i].kind) throw Error(ErrorCode::SchemaMismatch, "payload kinds differ");
        if (a.reports[i].kind == "verification") {
            diff_verification(out, a.reports[i].text, b.reports[i].text);
        } else if (a.reports[i].kind == "mass") {
            diff_mass(out, a.reports[i].text, b.reports[i].text);
        } else {
            throw Error(ErrorCode::SchemaMismatch, "unknown payload kind " + a.reports[i].kind);
        }
    }
    return out.str();
}

}  // namespace curvlab::store
