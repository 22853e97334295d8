#pragma once

#include <map>
#include <string>

#include "rarita/lattice.hpp"

// Binary field checkpoints. Layout (all little-endian):
//   bytes 0..7   magic "RSWFLD01"
//   u32          version (1)
//   u32          kind (1 = spinor-hom field, 2 = u1 connection)
//   u32          n (sites per axis)
//   u32          reserved (0)
//   f64          h (lattice spacing)
// then sites in x-major, y, z order:
//   kind 1: 6 complex entries per site, row-major over (row, col), each as
//           two f64 (re, im) -> 96 bytes per site
//   kind 2: 3 f64 per site (the 1-form components)
// A sidecar JSON file "<path>.meta.json" carries the same header fields in
// text plus free-form metadata. Round trips are bit exact.

namespace rarita {

inline constexpr char kCheckpointMagic[9] = "RSWFLD01";
inline constexpr uint32_t kCheckpointVersion = 1;
inline constexpr uint32_t kKindSpinorField = 1;
inline constexpr uint32_t kKindConnection = 2;

void write_checkpoint(const std::string& path, const SpinorHomField& f,
                      const std::map<std::string, std::string>& meta = {});
void write_checkpoint(const std::string& path, const U1Connection& A,
                      const std::map<std::string, std::string>& meta = {});

SpinorHomField read_spinor_checkpoint(const std::string& path);
U1Connection read_connection_checkpoint(const std::string& path);

/// Sidecar metadata of a checkpoint (flat string map).
std::map<std::string, std::string> read_checkpoint_meta(const std::string& path);

}  // namespace rarita
