#include "mbrep/numsys.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "mbrep/minweight.hpp"

namespace mbrep {

namespace {

// Trial-division factorization; bases are <= 2^63 so this always terminates.
std::map<std::uint64_t, std::uint32_t> factorize(std::uint64_t n) {
    std::map<std::uint64_t, std::uint32_t> factors;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        while (n % p == 0) {
            ++factors[p];
            n /= p;
        }
    }
    if (n > 1) ++factors[n];
    return factors;
}

// Row rank over the rationals via fraction-free Gaussian elimination.
std::size_t rational_rank(std::vector<std::vector<Int>> m) {
    std::size_t rank = 0;
    const std::size_t rows = m.size();
    if (rows == 0) return 0;
    const std::size_t cols = m[0].size();
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && m[pivot][col] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[rank], m[pivot]);
        for (std::size_t i = rank + 1; i < rows; ++i) {
            if (m[i][col] == 0) continue;
            const Int a = m[i][col];
            const Int b = m[rank][col];
            for (std::size_t j = col; j < cols; ++j) {
                m[i][j] = m[i][j] * b - m[rank][j] * a;
            }
        }
        ++rank;
    }
    return rank;
}

std::vector<std::vector<Int>> to_int_matrix(const FactorMatrix& fm) {
    std::vector<std::vector<Int>> m;
    m.reserve(fm.rows.size());
    for (const auto& row : fm.rows) {
        std::vector<Int> r;
        r.reserve(row.size());
        for (auto e : row) r.emplace_back(static_cast<unsigned long>(e));
        m.push_back(std::move(r));
    }
    return m;
}

std::vector<std::uint64_t> parse_int_list(std::string_view text, const std::string& key) {
    auto open = text.find('[');
    auto close = text.rfind(']');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
        throw ValidationError("config: expected a [..] list for key '" + key + "'");
    }
    std::string body(text.substr(open + 1, close - open - 1));
    for (char& c : body) {
        if (c == ',') c = ' ';
    }
    std::istringstream in(body);
    std::vector<std::uint64_t> values;
    long long v = 0;
    while (in >> v) {
        if (v < 0) throw ValidationError("config: negative value in '" + key + "'");
        values.push_back(static_cast<std::uint64_t>(v));
    }
    if (!in.eof()) throw ValidationError("config: malformed list for key '" + key + "'");
    return values;
}

}  // namespace

FactorMatrix factor_exponent_matrix(const std::vector<std::uint64_t>& bases) {
    for (auto b : bases) {
        if (b <= 1) throw ValidationError("factor_exponent_matrix: base must be > 1");
    }
    std::vector<std::map<std::uint64_t, std::uint32_t>> factored;
    factored.reserve(bases.size());
    std::map<std::uint64_t, std::uint32_t> prime_union;
    for (auto b : bases) {
        factored.push_back(factorize(b));
        for (const auto& [p, e] : factored.back()) prime_union[p] = 0;
    }
    FactorMatrix fm;
    for (const auto& [p, unused] : prime_union) fm.primes.push_back(p);
    for (const auto& f : factored) {
        std::vector<std::uint32_t> row;
        row.reserve(fm.primes.size());
        for (auto p : fm.primes) {
            auto it = f.find(p);
            row.push_back(it == f.end() ? 0u : it->second);
        }
        fm.rows.push_back(std::move(row));
    }
    return fm;
}

bool is_mult_independent_set(const std::vector<std::uint64_t>& bases) {
    const FactorMatrix fm = factor_exponent_matrix(bases);
    return rational_rank(to_int_matrix(fm)) == bases.size();
}

BaseSystem BaseSystem::create(std::vector<std::uint64_t> bases,
                              std::vector<std::uint64_t> digits) {
    if (bases.empty()) throw ValidationError("base system: need at least one base");
    for (auto b : bases) {
        if (b <= 1) throw ValidationError("base system: bases must be > 1");
    }
    {
        auto sorted = bases;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw ValidationError("base system: duplicate base");
        }
    }
    std::sort(digits.begin(), digits.end());
    digits.erase(std::unique(digits.begin(), digits.end()), digits.end());
    if (digits.empty() || digits.front() != 0) {
        throw ValidationError("base system: digit set must contain 0");
    }
    if (!std::binary_search(digits.begin(), digits.end(), std::uint64_t(1))) {
        throw ValidationError("base system: digit set must contain 1");
    }

    BaseSystem s;
    s.bases_ = std::move(bases);
    s.digits_ = std::move(digits);

    const FactorMatrix fm = factor_exponent_matrix(s.bases_);
    s.full_set_independent_ = rational_rank(to_int_matrix(fm)) == s.bases_.size();
    for (std::size_t i = 0; i < s.bases_.size(); ++i) {
        for (std::size_t j = i + 1; j < s.bases_.size(); ++j) {
            FactorMatrix sub;
            sub.primes = fm.primes;
            sub.rows = {fm.rows[i], fm.rows[j]};
            if (rational_rank(to_int_matrix(sub)) == 2) {
                s.pairwise_independent_.emplace_back(i, j);
            }
        }
    }

    s.power_tables_.resize(s.bases_.size());
    for (std::size_t j = 0; j < s.bases_.size(); ++j) {
        std::uint64_t p = 1;
        const std::uint64_t b = s.bases_[j];
        s.power_tables_[j].push_back(p);
        while (p <= (std::numeric_limits<std::uint64_t>::max() / b)) {
            p *= b;
            s.power_tables_[j].push_back(p);
        }
    }
    return s;
}

BaseSystem BaseSystem::from_config_text(std::string_view text) {
    std::vector<std::uint64_t> bases;
    std::vector<std::uint64_t> digits;
    bool saw_bases = false;
    bool saw_digits = false;

    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ValidationError("config: expected 'key = value'");
        std::string key = line.substr(0, eq);
        key.erase(std::remove_if(key.begin(), key.end(),
                                 [](unsigned char c) { return std::isspace(c); }),
                  key.end());
        std::string value = line.substr(eq + 1);
        if (key == "bases") {
            bases = parse_int_list(value, key);
            saw_bases = true;
        } else if (key == "digits") {
            digits = parse_int_list(value, key);
            saw_digits = true;
        } else {
            throw ValidationError("config: unknown key '" + key + "'");
        }
    }
    if (!saw_bases) throw ValidationError("config: missing 'bases'");
    if (!saw_digits) throw ValidationError("config: missing 'digits'");
    return create(std::move(bases), std::move(digits));
}

BaseSystem BaseSystem::from_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_config_text(buf.str());
}

std::uint64_t BaseSystem::min_base() const {
    return *std::min_element(bases_.begin(), bases_.end());
}

bool BaseSystem::has_digit(std::uint64_t d) const {
    return std::binary_search(digits_.begin(), digits_.end(), d);
}

std::size_t BaseSystem::digit_index(std::uint64_t d) const {
    auto it = std::lower_bound(digits_.begin(), digits_.end(), d);
    if (it == digits_.end() || *it != d) {
        throw ValidationError("digit " + std::to_string(d) + " not in digit set");
    }
    return static_cast<std::size_t>(it - digits_.begin());
}

bool BaseSystem::has_base_two() const {
    return std::find(bases_.begin(), bases_.end(), std::uint64_t(2)) != bases_.end();
}

PowerProduct make_power_product(const BaseSystem& system,
                                std::vector<std::uint32_t> exponents) {
    if (exponents.size() != system.r()) {
        throw ValidationError("power product: exponent count != r");
    }
    PowerProduct pp;
    pp.exponents = std::move(exponents);
    pp.value = 1;
    for (std::size_t j = 0; j < system.r(); ++j) {
        pp.value *= pow_int(system.bases()[j], pp.exponents[j]);
    }
    return pp;
}

Int evaluate_power_product(const BaseSystem& system, const PowerProduct& pp) {
    Int v(1);
    for (std::size_t j = 0; j < system.r(); ++j) {
        v *= pow_int(system.bases()[j], pp.exponents[j]);
    }
    return v;
}

Representation Representation::create(const BaseSystem& system, std::vector<Term> terms) {
    for (const auto& t : terms) {
        if (t.digit == 0) throw ValidationError("representation: zero digit stored");
        if (!system.has_digit(t.digit)) {
            throw ValidationError("representation: digit " + std::to_string(t.digit) +
                                  " not in digit set");
        }
        if (evaluate_power_product(system, t.pp) != t.pp.value) {
            throw ValidationError("representation: power-product value mismatch");
        }
    }
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.pp.value > b.pp.value; });
    for (std::size_t i = 1; i < terms.size(); ++i) {
        if (terms[i - 1].pp.value == terms[i].pp.value) {
            throw ValidationError("representation: duplicate power-product value");
        }
    }
    Representation r;
    r.terms_ = std::move(terms);
    return r;
}

Int Representation::value() const {
    Int v(0);
    for (const auto& t : terms_) {
        v += t.pp.value * Int(static_cast<unsigned long>(t.digit));
    }
    return v;
}

std::string completeness_name(Completeness c) {
    switch (c) {
        case Completeness::guaranteed: return "guaranteed";
        case Completeness::exhaustively_checked: return "exhaustively-checked";
        case Completeness::unknown: return "unknown";
    }
    return "unknown";
}

ValidationReport validate_system(const BaseSystem& system,
                                 std::uint64_t completeness_limit) {
    ValidationReport report;
    report.completeness_limit = completeness_limit;
    report.full_set_independent = system.full_set_independent();
    for (const auto& [i, j] : system.pairwise_independent()) {
        report.pairwise_independent_pairs.emplace_back(system.bases()[i], system.bases()[j]);
    }
    if (!system.full_set_independent()) {
        report.diagnostics.push_back("bases are not multiplicatively independent as a set");
    }
    if (system.r() >= 2 && report.pairwise_independent_pairs.empty()) {
        report.diagnostics.push_back("no multiplicatively independent pair of bases");
    }

    // Tier 1: standard base-b_min representations exist when D covers
    // {0..b_min-1}.
    bool covers_standard = true;
    for (std::uint64_t d = 0; d < system.min_base(); ++d) {
        if (!system.has_digit(d)) {
            covers_standard = false;
            break;
        }
    }
    if (covers_standard) {
        report.completeness = Completeness::guaranteed;
        return report;
    }

    // Tier 2: exhaustive reachability sweep with the exact solver.
    if (completeness_limit >= 1) {
        WeightProfile profile = weight_profile(system, completeness_limit);
        std::vector<std::uint64_t> missing;
        for (std::uint64_t n = 1; n <= completeness_limit; ++n) {
            if (profile.weights[n] == kWeightUnrepresentable) missing.push_back(n);
        }
        if (missing.empty()) {
            report.completeness = Completeness::exhaustively_checked;
            return report;
        }
        report.completeness = Completeness::unknown;
        std::ostringstream msg;
        msg << missing.size() << " unrepresentable value(s) <= " << completeness_limit
            << "; first: " << missing.front();
        report.diagnostics.push_back(msg.str());
        return report;
    }

    report.completeness = Completeness::unknown;
    report.diagnostics.push_back("no representability criterion applies and sweep disabled");
    return report;
}

}  // namespace mbrep
