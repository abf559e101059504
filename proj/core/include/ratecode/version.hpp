#ifndef RATECODE_VERSION_HPP_
#define RATECODE_VERSION_HPP_

namespace ratecode {

inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

}  // namespace ratecode

#endif  // RATECODE_VERSION_HPP_
