#ifndef BOGO_SHA256_HPP
#define BOGO_SHA256_HPP

#include <string>

namespace bogo {

// Hex digest of the SHA-256 of the given bytes; used for input content
// hashes in run manifests.
std::string sha256_hex(const std::string& data);

}  // namespace bogo

#endif
