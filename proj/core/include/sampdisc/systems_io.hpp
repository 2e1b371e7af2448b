#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "sampdisc/discretize.hpp"
#include "sampdisc/frame_core.hpp"
#include "sampdisc/sampled_system.hpp"

namespace sampdisc {

enum class SystemKind { trig, dft, walsh, random_orthonormal, indicator, file };

const char* to_string(SystemKind kind) noexcept;
SystemKind parse_system_kind(std::string_view name);
Field parse_field(std::string_view name);

/// Built-in systems, all on M points with uniform weights:
///   trig               real, N = 2n+1: 1, sqrt2 cos(kx), sqrt2 sin(kx) on x_j = 2 pi j / M; M >= N
///   dft                e^{ikx}, k = 0..N-1, on the same grid; M >= N
///   walsh              first N rows of the Sylvester Hadamard matrix; M a power of 2, real
///   random_orthonormal seeded Gaussian matrix, orthonormalized; field selectable
///   indicator          u_i = sqrt(M) at point i and 0 elsewhere; real
///   file               load_system(path)
struct SystemDescriptor {
  SystemKind kind = SystemKind::dft;
  std::size_t N = 0;
  std::size_t M = 0;
  std::uint64_t seed = 0;
  Field field = Field::complex;  // random_orthonormal only; other kinds fix their own
  std::filesystem::path path;    // file only
};

SampledSystem make_system(const SystemDescriptor& descriptor);

/// Real trigonometric system of odd dimension N on [0, 2 pi) with the
/// normalized Lebesgue measure. Family tag "trig:N".
ContinuousSystem trig_continuous(std::size_t N);

/// Rebuilds a continuous system from its family tag.
ContinuousSystem continuous_from_family(std::string_view family);

// ---------------------------------------------------------------------------
// System files: CSV (one row per point) plus a JSON sidecar at <path>.json.
// CSV columns: x0..x{d-1}, then u0..u{N-1} (real) or u0_re,u0_im,... (complex).

void save_system(const SampledSystem& system, const std::filesystem::path& path);
SampledSystem load_system(const std::filesystem::path& path);

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

// ---------------------------------------------------------------------------
// Certificate documents (JSON, schema_version "1", floats as decimal strings).

std::string certificate_to_string(const DiscretizationCertificate& cert);
DiscretizationCertificate certificate_from_string(std::string_view text);

void save_certificate(const DiscretizationCertificate& cert, const std::filesystem::path& path);
DiscretizationCertificate load_certificate(const std::filesystem::path& path);

}  // namespace sampdisc
