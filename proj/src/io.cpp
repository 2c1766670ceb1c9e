#include "heckelab/io.hpp"

#include <unistd.h>

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "heckelab/errors.hpp"
#include "json.hpp"

namespace heckelab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string where(const fs::path& path, std::size_t line) {
    return path.string() + ":" + std::to_string(line) + ": ";
}

void require_audited(const EigenvalueTable& table) {
    if (table.audited_bound() < 1)
        throw audit_error("refusing to save table '" + table.label() +
                          "': it has not passed a Hecke audit");
}

// Writes via a sibling temp file + rename so readers never observe a
// partial table.
void atomic_write(const fs::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path())
        fs::create_directories(path.parent_path(), ec);  // best effort
    const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw io_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out)
            throw io_error("short write to " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw io_error("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                       ec.message());
    }
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

std::int64_t parse_i64(const std::string& s, const std::string& context) {
    try {
        std::size_t used = 0;
        const std::int64_t v = std::stoll(s, &used);
        if (used != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw io_error(context + ": expected an integer, got '" + s + "'");
    }
}

// Exact decimal integer (optional sign); anything else — including
// fractional or floating notation from irrational-field exports — is
// rejected.
ZZ parse_zz(const std::string& s, const std::string& context) {
    const std::string t = trim(s);
    bool ok = !t.empty();
    for (std::size_t i = 0; ok && i < t.size(); ++i) {
        const char c = t[i];
        if (i == 0 && (c == '+' || c == '-'))
            ok = t.size() > 1;
        else
            ok = std::isdigit(static_cast<unsigned char>(c)) != 0;
    }
    if (!ok)
        throw io_error(context + ": expected an exact decimal integer, got '" + t + "'");
    return ZZ(t);
}

struct Header {
    std::string label;
    std::int64_t weight = -1;
    std::int64_t level = -1;
    std::int64_t n_max = -1;
};

EigenvalueTable assemble(const fs::path& path, Header h, std::vector<ZZ> coeffs) {
    if (h.label.empty())
        throw io_error(path.string() + ": missing label");
    if (h.weight < 0)
        throw io_error(path.string() + ": missing weight");
    if (h.level < 0)
        throw io_error(path.string() + ": missing level");
    if (h.weight < 2 || h.weight % 2 != 0)
        throw io_error(path.string() + ": weight " + std::to_string(h.weight) +
                       " is not an even integer >= 2");
    if (h.level < 1)
        throw io_error(path.string() + ": level must be >= 1");
    if (h.n_max >= 0 && h.n_max != static_cast<std::int64_t>(coeffs.size()))
        throw io_error(path.string() + ": n_max=" + std::to_string(h.n_max) +
                       " does not match " + std::to_string(coeffs.size()) + " rows");
    if (coeffs.empty())
        throw io_error(path.string() + ": no coefficient rows");

    FormSpec spec{h.label, static_cast<int>(h.weight), h.level, ExternalSource{}, false,
                  h.label};
    EigenvalueTable table(std::move(spec), std::move(coeffs));
    const std::int64_t bound = std::min<std::int64_t>(table.n_max(), kLoadAuditBound);
    if (AuditReport report = audit_hecke(table, bound); !report.pass)
        throw audit_error(path.string() + ": " + report.detail);
    return table;
}

EigenvalueTable load_csv(const fs::path& path, std::istream& in) {
    Header h;
    std::vector<ZZ> coeffs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trim(line);
        if (s.empty())
            continue;
        if (s[0] == '#') {
            const std::string kv = trim(s.substr(1));
            const std::size_t eq = kv.find('=');
            if (eq == std::string::npos)
                continue;  // free-form comment
            const std::string key = trim(kv.substr(0, eq));
            const std::string val = trim(kv.substr(eq + 1));
            if (key == "label")
                h.label = val;
            else if (key == "weight")
                h.weight = parse_i64(val, where(path, lineno) + "weight");
            else if (key == "level")
                h.level = parse_i64(val, where(path, lineno) + "level");
            else if (key == "n_max")
                h.n_max = parse_i64(val, where(path, lineno) + "n_max");
            // unknown keys (format_version, exporter notes, ...) are ignored
            continue;
        }
        const std::size_t comma = s.find(',');
        if (comma == std::string::npos)
            throw io_error(where(path, lineno) + "expected 'n,a', got '" + s + "'");
        const std::int64_t n =
            parse_i64(trim(s.substr(0, comma)), where(path, lineno) + "row index");
        const std::int64_t expected = static_cast<std::int64_t>(coeffs.size()) + 1;
        if (n != expected)
            throw io_error(where(path, lineno) + "row index " + std::to_string(n) +
                           " out of order (expected " + std::to_string(expected) + ")");
        coeffs.push_back(parse_zz(s.substr(comma + 1), where(path, lineno) + "coefficient"));
    }
    return assemble(path, std::move(h), std::move(coeffs));
}

EigenvalueTable load_json(const fs::path& path, std::istream& in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw io_error(path.string() + ": " + e.what());
    }
    if (!doc.is_object())
        throw io_error(path.string() + ": top level must be a JSON object");

    Header h;
    try {
        h.label = doc.at("label").get<std::string>();
        h.weight = doc.at("weight").get<std::int64_t>();
        h.level = doc.at("level").get<std::int64_t>();
        if (doc.contains("n_max"))
            h.n_max = doc.at("n_max").get<std::int64_t>();
        const json& arr = doc.at("coefficients");
        if (!arr.is_array())
            throw io_error(path.string() + ": 'coefficients' must be an array");
        std::vector<ZZ> coeffs;
        coeffs.reserve(arr.size());
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const json& v = arr[i];
            const std::string context =
                path.string() + ": coefficients[" + std::to_string(i) + "]";
            if (v.is_string())
                coeffs.push_back(parse_zz(v.get<std::string>(), context));
            else if (v.is_number_integer())
                coeffs.push_back(ZZ(static_cast<long>(v.get<std::int64_t>())));
            else
                throw io_error(context + ": expected a decimal string or integer");
        }
        return assemble(path, std::move(h), std::move(coeffs));
    } catch (const json::exception& e) {
        throw io_error(path.string() + ": " + e.what());
    }
}

}  // namespace

void save_table(const EigenvalueTable& table, const fs::path& path) {
    require_audited(table);
    std::ostringstream out;
    out << "# format_version=1\n";
    out << "# label=" << table.label() << "\n";
    out << "# weight=" << table.weight() << "\n";
    out << "# level=" << table.level() << "\n";
    out << "# n_max=" << table.n_max() << "\n";
    for (std::int64_t n = 1; n <= table.n_max(); ++n)
        out << n << "," << table.a(n).get_str() << "\n";
    atomic_write(path, out.str());
}

void save_table_json(const EigenvalueTable& table, const fs::path& path) {
    require_audited(table);
    json doc;
    doc["format_version"] = 1;
    doc["label"] = table.label();
    doc["weight"] = table.weight();
    doc["level"] = table.level();
    doc["n_max"] = table.n_max();
    json arr = json::array();
    for (std::int64_t n = 1; n <= table.n_max(); ++n)
        arr.push_back(table.a(n).get_str());
    doc["coefficients"] = std::move(arr);
    atomic_write(path, doc.dump(2) + "\n");
}

EigenvalueTable load_table(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw io_error("cannot open " + path.string());
    // Sniff the codec from the first non-space byte.
    int c;
    while ((c = in.peek()) != EOF && std::isspace(c))
        in.get();
    if (c == '{')
        return load_json(path, in);
    return load_csv(path, in);
}

EigenvalueTable cached_expand(const FormSpec& spec, std::int64_t n_max,
                              const fs::path& cache_dir) {
    if (cache_dir.empty())
        return expand(spec, n_max);
    const fs::path entry =
        cache_dir / (spec.label + ".n" + std::to_string(n_max) + ".csv");
    if (fs::exists(entry)) {
        try {
            EigenvalueTable cached = load_table(entry);
            if (cached.label() == spec.label && cached.weight() == spec.weight &&
                cached.level() == spec.level && cached.n_max() == n_max)
                return cached.with_spec(spec);
            // fall through: stale or mislabeled entry, rebuild it
        } catch (const std::exception&) {
            // unreadable/corrupt cache entry: rebuild it
        }
    }
    EigenvalueTable table = expand(spec, n_max);
    save_table(table, entry);
    return table;
}

}  // namespace heckelab
