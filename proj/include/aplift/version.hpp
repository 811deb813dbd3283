#pragma once

namespace aplift {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kCertificateSchema = "aplift-certificate/1";

}  // namespace aplift
