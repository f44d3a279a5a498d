#include "gts/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "gts/problems.hpp"
#include "gts/reference_front.hpp"

namespace gts {

namespace {

struct Scalar {
    std::string text;
    bool quoted = false;
};

struct Entry {
    std::vector<Scalar> items;
    bool is_array = false;
    int line = 0;
};

[[noreturn]] void fail(int line, const std::string& message)
{
    throw std::invalid_argument("config line " + std::to_string(line) + ": " + message);
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

class ValueReader {
public:
    ValueReader(std::string_view text, int line) : text_(text), line_(line) {}

    Entry read()
    {
        Entry entry;
        entry.line = line_;
        skip_space();
        if (peek() == '[') {
            ++pos_;
            entry.is_array = true;
            skip_space();
            if (peek() == ']') {
                ++pos_;
            } else {
                while (true) {
                    entry.items.push_back(scalar());
                    skip_space();
                    const char c = peek();
                    ++pos_;
                    if (c == ']') {
                        break;
                    }
                    if (c != ',') {
                        fail(line_, "expected ',' or ']' in array");
                    }
                    skip_space();
                }
            }
        } else {
            entry.items.push_back(scalar());
        }
        skip_space();
        if (pos_ < text_.size() && text_[pos_] != '#') {
            fail(line_, "unexpected trailing text");
        }
        return entry;
    }

private:
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    Scalar scalar()
    {
        Scalar s;
        if (peek() == '"') {
            s.quoted = true;
            ++pos_;
            while (pos_ < text_.size() && text_[pos_] != '"') {
                if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
                    ++pos_;
                }
                s.text += text_[pos_++];
            }
            if (peek() != '"') {
                fail(line_, "unterminated string");
            }
            ++pos_;
            return s;
        }
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == ',' || c == ']' || c == '#' || std::isspace(static_cast<unsigned char>(c))) {
                break;
            }
            s.text += c;
            ++pos_;
        }
        if (s.text.empty()) {
            fail(line_, "missing value");
        }
        return s;
    }

    std::string_view text_;
    int line_;
    std::size_t pos_ = 0;
};

long long to_integer(const Scalar& s, int line)
{
    long long v = 0;
    const auto* end = s.text.data() + s.text.size();
    const auto [ptr, ec] = std::from_chars(s.text.data(), end, v);
    if (s.quoted || ec != std::errc() || ptr != end) {
        fail(line, "expected an integer, got '" + s.text + "'");
    }
    return v;
}

double to_real(const Scalar& s, int line)
{
    if (s.quoted) {
        fail(line, "expected a number, got a string");
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s.text, &used);
    } catch (const std::exception&) {
        fail(line, "expected a number, got '" + s.text + "'");
    }
    if (used != s.text.size()) {
        fail(line, "expected a number, got '" + s.text + "'");
    }
    return v;
}

bool to_bool(const Scalar& s, int line)
{
    if (!s.quoted && s.text == "true") {
        return true;
    }
    if (!s.quoted && s.text == "false") {
        return false;
    }
    fail(line, "expected true or false, got '" + s.text + "'");
}

const Scalar& single(const Entry& e)
{
    if (e.is_array || e.items.size() != 1) {
        fail(e.line, "expected a single value");
    }
    return e.items.front();
}

std::vector<std::string> strings(const Entry& e)
{
    std::vector<std::string> out;
    for (const auto& s : e.items) {
        out.push_back(s.text);
    }
    return out;
}

std::vector<int> integers(const Entry& e)
{
    std::vector<int> out;
    for (const auto& s : e.items) {
        out.push_back(static_cast<int>(to_integer(s, e.line)));
    }
    return out;
}

} // namespace

std::size_t ExperimentConfig::reference_size(std::size_t objective_count) const
{
    const auto& chosen = objective_count >= 3 ? ref_front_n3 : ref_front_n2;
    return chosen.value_or(default_reference_size(objective_count));
}

void ExperimentConfig::validate() const
{
    auto require = [](bool ok, const std::string& message) {
        if (!ok) {
            throw std::invalid_argument(message);
        }
    };
    require(!problems.empty(), "at least one problem is required");
    for (const auto& p : problems) {
        parse_selection(p);
    }
    require(!groups.empty(), "at least one group is required");
    for (int g : groups) {
        require(g >= 1 && g <= 3, "groups must be 1, 2 or 3");
    }
    require(!schedules.empty(), "at least one schedule is required");
    require(!n_t_values.empty() && !tau_t_values.empty(), "n_t and tau_t need at least one value");
    for (int v : n_t_values) {
        require(v >= 1, "n_t values must be positive");
    }
    for (int v : tau_t_values) {
        require(v >= 1, "tau_t values must be positive");
    }
    require(environments >= 1, "T must be positive");
    require(warmup_generations >= 0, "warmup must be nonnegative");
    require(repeats >= 1, "repeats must be positive");
    require(dimension >= 4, "D must be at least 4");
    require(p_exponent >= 1.0, "p must be at least 1");
    require(parallel >= 1, "parallel must be positive");
    require(!algorithms.empty(), "at least one algorithm is required");
    for (const auto& a : algorithms) {
        make_optimizer(a, optimizer);
    }
    for (auto n : {ref_front_n2, ref_front_n3}) {
        require(!n || *n >= 2, "reference front sizes must be at least 2");
    }
    for (Schedule s : schedules) {
        if (s == Schedule::IrregularPi) {
            require(static_cast<std::size_t>(environments) + 10 <= kPiDigitCount,
                    "T + 10 exceeds the embedded digit table of " + std::to_string(kPiDigitCount));
        }
    }
}

ExperimentConfig parse_config(std::string_view text)
{
    std::map<std::string, Entry> entries;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            fail(line_no, "expected key = value");
        }
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty()) {
            fail(line_no, "missing key");
        }
        if (entries.contains(key)) {
            fail(line_no, "duplicate key '" + key + "'");
        }
        entries[key] = ValueReader(line.substr(eq + 1), line_no).read();
    }

    ExperimentConfig cfg;
    for (const auto& [key, e] : entries) {
        if (key == "problems") {
            cfg.problems = strings(e);
        } else if (key == "groups") {
            cfg.groups = integers(e);
        } else if (key == "schedules") {
            cfg.schedules.clear();
            for (const auto& s : e.items) {
                try {
                    cfg.schedules.push_back(parse_schedule(s.text));
                } catch (const std::exception& ex) {
                    fail(e.line, ex.what());
                }
            }
        } else if (key == "n_t") {
            cfg.n_t_values = integers(e);
        } else if (key == "tau_t") {
            cfg.tau_t_values = integers(e);
        } else if (key == "T") {
            cfg.environments = static_cast<int>(to_integer(single(e), e.line));
        } else if (key == "warmup") {
            cfg.warmup_generations = static_cast<int>(to_integer(single(e), e.line));
        } else if (key == "repeats") {
            cfg.repeats = static_cast<int>(to_integer(single(e), e.line));
        } else if (key == "D") {
            cfg.dimension = static_cast<std::size_t>(to_integer(single(e), e.line));
        } else if (key == "N") {
            cfg.optimizer.pop_size = static_cast<std::size_t>(to_integer(single(e), e.line));
        } else if (key == "p") {
            cfg.p_exponent = to_real(single(e), e.line);
        } else if (key == "master_seed") {
            cfg.master_seed = static_cast<std::uint64_t>(to_integer(single(e), e.line));
        } else if (key == "output_dir") {
            cfg.output_dir = single(e).text;
        } else if (key == "algorithms") {
            cfg.algorithms = strings(e);
        } else if (key == "ref_front_n2") {
            cfg.ref_front_n2 = static_cast<std::size_t>(to_integer(single(e), e.line));
        } else if (key == "ref_front_n3") {
            cfg.ref_front_n3 = static_cast<std::size_t>(to_integer(single(e), e.line));
        } else if (key == "restart_fraction") {
            cfg.optimizer.restart_fraction = to_real(single(e), e.line);
        } else if (key == "crossover_probability") {
            cfg.optimizer.crossover_probability = to_real(single(e), e.line);
        } else if (key == "crossover_eta") {
            cfg.optimizer.crossover_eta = to_real(single(e), e.line);
        } else if (key == "mutation_probability") {
            cfg.optimizer.mutation_probability = to_real(single(e), e.line);
        } else if (key == "mutation_eta") {
            cfg.optimizer.mutation_eta = to_real(single(e), e.line);
        } else if (key == "parallel") {
            cfg.parallel = static_cast<int>(to_integer(single(e), e.line));
        } else if (key == "save_fronts") {
            cfg.save_fronts = to_bool(single(e), e.line);
        } else if (key == "cache_dir") {
            cfg.cache_dir = single(e).text;
        } else {
            fail(e.line, "unknown key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

} // namespace gts
