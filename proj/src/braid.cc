// Copyright 2026 The AnyonLab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "anyonlab/braid.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "anyonlab/error.h"

namespace anyonlab {

ParticleSystem::ParticleSystem(std::vector<std::string> labels, std::map<std::string, std::size_t> species_dims,
                               std::size_t dimension_cap)
    : labels_(std::move(labels)), species_dims_(std::move(species_dims)) {
    for (const auto &[name, d] : species_dims_) {
        if (d == 0) {
            throw Error(ErrorCode::InvalidConfig, "species '" + name + "' has dimension 0");
        }
    }
    for (const auto &label : labels_) {
        std::size_t d = dim_of(label);
        if (total_dim_ > dimension_cap / d) {
            throw Error(ErrorCode::SizeOverflow, "particle system dimension exceeds cap " +
                                                     std::to_string(dimension_cap));
        }
        total_dim_ *= d;
    }
}

std::size_t ParticleSystem::tensor_position(std::size_t slot) const {
    if (slot < 1 || slot > labels_.size()) {
        throw Error(ErrorCode::IndexOutOfRange, "slot " + std::to_string(slot) + " outside [1, " +
                                                    std::to_string(labels_.size()) + "]");
    }
    return labels_.size() - slot;
}

const std::string &ParticleSystem::species_at_slot(std::size_t slot) const {
    return labels_[tensor_position(slot)];
}

std::size_t ParticleSystem::dim_of(const std::string &species) const {
    auto it = species_dims_.find(species);
    if (it == species_dims_.end()) {
        throw Error(ErrorCode::InvalidConfig, "unknown species '" + species + "'");
    }
    return it->second;
}

ParticleSystem ParticleSystem::exchanged(std::size_t slot) const {
    if (slot < 1 || slot + 1 > labels_.size()) {
        throw Error(ErrorCode::IndexOutOfRange, "exchange index " + std::to_string(slot) + " outside [1, " +
                                                    std::to_string(labels_.size() - 1) + "]");
    }
    ParticleSystem out = *this;
    std::size_t p = labels_.size() - slot;
    std::swap(out.labels_[p - 1], out.labels_[p]);
    return out;
}

void BraidRegistry::set_dim(const std::string &species, std::size_t dim) {
    if (dim == 0) {
        throw Error(ErrorCode::InvalidConfig, "species '" + species + "' has dimension 0");
    }
    dims_[species] = dim;
}

void BraidRegistry::add(BraidMatrix braid, double tol) {
    auto dl = dims_.find(braid.left);
    auto dr = dims_.find(braid.right);
    if (dl == dims_.end() || dr == dims_.end()) {
        throw Error(ErrorCode::InvalidConfig,
                    "braid matrix " + braid.left + ":" + braid.right + " references a species without a dimension");
    }
    std::size_t n = dl->second * dr->second;
    if (braid.matrix.rows() != n || braid.matrix.cols() != n) {
        throw Error(ErrorCode::DimensionMismatch, "braid matrix " + braid.left + ":" + braid.right + " must be " +
                                                      std::to_string(n) + "x" + std::to_string(n));
    }
    double res = unitarity_residual(braid.matrix);
    if (res > tol) {
        throw Error(ErrorCode::NotUnitary, "braid matrix " + braid.left + ":" + braid.right +
                                               " has unitarity residual " + format_real(res));
    }
    auto key = std::make_pair(braid.left, braid.right);
    entries_.insert_or_assign(key, std::move(braid));
}

const BraidMatrix *BraidRegistry::find(const std::string &left, const std::string &right) const {
    auto it = entries_.find({left, right});
    return it == entries_.end() ? nullptr : &it->second;
}

const BraidMatrix &BraidRegistry::at(const std::string &left, const std::string &right) const {
    const BraidMatrix *m = find(left, right);
    if (m == nullptr) {
        throw Error(ErrorCode::MissingBraidMatrix, "no braid matrix registered for " + left + ":" + right);
    }
    return *m;
}

std::vector<std::string> BraidRegistry::species() const {
    std::vector<std::string> out;
    for (const auto &[name, d] : dims_) {
        out.push_back(name);
    }
    return out;
}

ComplexMatrix BraidRegistry::monodromy(const std::string &incoming, const std::string &stationary) const {
    return at(stationary, incoming).matrix * at(incoming, stationary).matrix;
}

ComplexMatrix pure_swap(std::size_t dim_left, std::size_t dim_right) {
    return swap_operator(dim_left, dim_right);
}

ComplexMatrix phase_swap(std::size_t dim, double phi) {
    return std::polar(1.0, phi) * swap_operator(dim, dim);
}

ComplexMatrix bell_braid() {
    const double h = 1 / std::numbers::sqrt2;
    return ComplexMatrix::from_rows({
        {h, 0, 0, h},
        {0, h, -h, 0},
        {0, h, h, 0},
        {-h, 0, 0, h},
    });
}

PureState::PureState(ParticleSystem system, ComplexVector amplitudes, double tol)
    : system_(std::move(system)), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != system_.total_dim()) {
        throw Error(ErrorCode::DimensionMismatch, "state has " + std::to_string(amplitudes_.size()) +
                                                      " amplitudes, system dimension is " +
                                                      std::to_string(system_.total_dim()));
    }
    double n = norm(amplitudes_);
    if (std::abs(n - 1) > tol) {
        throw Error(ErrorCode::InvalidState, "state norm " + format_real(n) + " != 1");
    }
}

BraidWord BraidWord::parse(std::string_view text) {
    BraidWord word;
    std::istringstream in{std::string(text)};
    std::string token;
    while (in >> token) {
        auto fail = [&]() {
            throw Error(ErrorCode::InvalidConfig, "cannot parse braid letter '" + token + "'");
        };
        if (token.size() < 2 || (token[0] != 'R' && token[0] != 'r')) {
            fail();
        }
        const char *begin = token.data() + 1;
        const char *end = token.data() + token.size();
        std::size_t index = 0;
        auto [p, ec] = std::from_chars(begin, end, index);
        if (ec != std::errc() || index == 0) {
            fail();
        }
        int power = 1;
        if (p != end) {
            if (*p != '^') {
                fail();
            }
            ++p;
            auto [q, ec2] = std::from_chars(p, end, power);
            if (ec2 != std::errc() || q != end || power == 0) {
                fail();
            }
        }
        int sign = power > 0 ? 1 : -1;
        for (int k = 0; k < std::abs(power); ++k) {
            word.letters.push_back({index, sign});
        }
    }
    return word;
}

std::string BraidWord::to_string() const {
    std::string out;
    std::size_t i = 0;
    while (i < letters.size()) {
        std::size_t j = i;
        while (j < letters.size() && letters[j] == letters[i]) {
            ++j;
        }
        int power = static_cast<int>(j - i) * letters[i].sign;
        if (!out.empty()) {
            out += ' ';
        }
        out += 'R' + std::to_string(letters[i].index);
        if (power != 1) {
            out += '^' + std::to_string(power);
        }
        i = j;
    }
    return out;
}

PureState apply_braid(const PureState &state, const BraidRegistry &registry, std::size_t i, int sign) {
    const ParticleSystem &sys = state.system();
    ParticleSystem next = sys.exchanged(i);
    if (sign != 1 && sign != -1) {
        throw Error(ErrorCode::InvalidConfig, "braid sign must be +1 or -1");
    }
    std::size_t p = sys.size() - i - 1;  // tensor position of slot i+1
    const std::string &x = sys.labels()[p];
    const std::string &y = sys.labels()[p + 1];
    ComplexMatrix m = sign > 0 ? registry.at(x, y).matrix : registry.at(y, x).matrix.adjoint();

    std::size_t dx = sys.dim_of(x);
    std::size_t dy = sys.dim_of(y);
    std::size_t outer = 1;
    for (std::size_t k = 0; k < p; ++k) {
        outer *= sys.dim_of(sys.labels()[k]);
    }
    std::size_t inner = 1;
    for (std::size_t k = p + 2; k < sys.size(); ++k) {
        inner *= sys.dim_of(sys.labels()[k]);
    }
    std::size_t block = dx * dy;
    if (m.rows() != block) {
        throw Error(ErrorCode::DimensionMismatch, "braid matrix size does not match species dimensions");
    }

    auto in = state.amplitudes();
    ComplexVector out(in.size());
    ComplexVector local(block);
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t r = 0; r < inner; ++r) {
            for (std::size_t k = 0; k < block; ++k) {
                local[k] = in[(o * block + k) * inner + r];
            }
            for (std::size_t row = 0; row < block; ++row) {
                Complex acc = 0;
                for (std::size_t k = 0; k < block; ++k) {
                    acc += m(row, k) * local[k];
                }
                out[(o * block + row) * inner + r] = acc;
            }
        }
    }
    return PureState(std::move(next), std::move(out), 1e-8);
}

PureState apply_word(const PureState &state, const BraidRegistry &registry, const BraidWord &word) {
    PureState cur = state;
    for (auto it = word.letters.rbegin(); it != word.letters.rend(); ++it) {
        cur = apply_braid(cur, registry, it->index, it->sign);
    }
    return cur;
}

std::pair<ComplexMatrix, ParticleSystem> word_operator(const ParticleSystem &system, const BraidRegistry &registry,
                                                       const BraidWord &word) {
    std::size_t n = system.total_dim();
    ComplexMatrix op(n, n);
    ParticleSystem final_system = system;
    for (std::size_t j = 0; j < n; ++j) {
        ComplexVector e(n);
        e[j] = 1;
        PureState out = apply_word(PureState(system, std::move(e)), registry, word);
        auto amp = out.amplitudes();
        for (std::size_t i = 0; i < n; ++i) {
            op(i, j) = amp[i];
        }
        final_system = out.system();
    }
    return {std::move(op), std::move(final_system)};
}

namespace {

bool within_copies(const std::vector<std::string> &labels, const std::map<std::string, std::size_t> &max_copies) {
    for (const auto &[name, limit] : max_copies) {
        if (static_cast<std::size_t>(std::count(labels.begin(), labels.end(), name)) > limit) {
            return false;
        }
    }
    return true;
}

std::string join(const std::vector<std::string> &labels) {
    std::string out;
    for (const auto &l : labels) {
        out += out.empty() ? l : "," + l;
    }
    return out;
}

void compare_words(YangBaxterReport &report, const BraidRegistry &registry, const std::vector<std::string> &labels,
                   const char *lhs, const char *rhs) {
    ParticleSystem sys(labels, registry.dims());
    auto [a, sa] = word_operator(sys, registry, BraidWord::parse(lhs));
    auto [b, sb] = word_operator(sys, registry, BraidWord::parse(rhs));
    double res = sa == sb ? max_abs_diff(a, b) : std::numeric_limits<double>::infinity();
    report.relations.push_back({std::string(lhs) + " = " + rhs + " on [" + join(labels) + "]", res});
    report.max_residual = std::max(report.max_residual, res);
}

}  // namespace

YangBaxterReport check_yang_baxter(const BraidRegistry &registry, std::vector<std::string> species,
                                   const std::map<std::string, std::size_t> &max_copies) {
    if (species.empty()) {
        species = registry.species();
    }
    YangBaxterReport report;
    std::size_t s = species.size();
    for (std::size_t a = 0; a < s; ++a) {
        for (std::size_t b = 0; b < s; ++b) {
            for (std::size_t c = 0; c < s; ++c) {
                std::vector<std::string> labels{species[a], species[b], species[c]};
                if (within_copies(labels, max_copies)) {
                    compare_words(report, registry, labels, "R1 R2 R1", "R2 R1 R2");
                }
                for (std::size_t d = 0; d < s; ++d) {
                    labels = {species[a], species[b], species[c], species[d]};
                    if (within_copies(labels, max_copies)) {
                        compare_words(report, registry, labels, "R1 R3", "R3 R1");
                    }
                }
            }
        }
    }
    return report;
}

MonodromySpec MonodromySpec::from_registry(const BraidRegistry &registry, const std::string &incoming,
                                           const std::string &stationary, const SpectralOptions &options) {
    MonodromySpec out;
    out.incoming = incoming;
    out.stationary = stationary;
    out.dim_incoming = registry.dims().at(incoming);
    out.dim_stationary = registry.dims().at(stationary);
    out.ccw = registry.at(incoming, stationary).matrix;
    out.cw = registry.at(stationary, incoming).matrix.adjoint();
    out.ret = registry.at(stationary, incoming).matrix;
    out.monodromy = registry.monodromy(incoming, stationary);
    out.spectrum = spectral_decompose(out.monodromy, options);
    return out;
}

MonodromySpec MonodromySpec::from_monodromy(ComplexMatrix monodromy, std::size_t dim_incoming,
                                            std::size_t dim_stationary, const SpectralOptions &options) {
    std::size_t n = dim_incoming * dim_stationary;
    if (monodromy.rows() != n || monodromy.cols() != n) {
        throw Error(ErrorCode::DimensionMismatch, "monodromy must be " + std::to_string(n) + "x" + std::to_string(n));
    }
    MonodromySpec out;
    out.dim_incoming = dim_incoming;
    out.dim_stationary = dim_stationary;
    out.spectrum = spectral_decompose(monodromy, options);
    double res = unitarity_residual(monodromy);
    if (res > options.normality_tol) {
        throw Error(ErrorCode::NotUnitary, "monodromy has unitarity residual " + format_real(res));
    }
    ComplexMatrix root = principal_sqrt(out.spectrum);
    ComplexMatrix sigma = swap_operator(dim_incoming, dim_stationary);
    out.ccw = sigma * root;
    out.cw = sigma * root.adjoint();
    out.ret = root * swap_operator(dim_stationary, dim_incoming);
    out.monodromy = std::move(monodromy);
    return out;
}

BraidRegistry MonodromySpec::registry() const {
    BraidRegistry reg;
    reg.set_dim(incoming, dim_incoming);
    reg.set_dim(stationary, dim_stationary);
    reg.add({incoming, stationary, ccw});
    if (incoming != stationary) {
        reg.add({stationary, incoming, ret});
        reg.add({incoming, incoming, pure_swap(dim_incoming, dim_incoming)});
        reg.add({stationary, stationary, pure_swap(dim_stationary, dim_stationary)});
    }
    return reg;
}

}  // namespace anyonlab
