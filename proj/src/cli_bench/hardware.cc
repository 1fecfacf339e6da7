#include <sys/utsname.h>

#include <ctime>
#include <fstream>
#include <thread>

#include "helb/bench.h"

#ifndef HELB_BUILD_TYPE
#define HELB_BUILD_TYPE "unknown"
#endif

namespace helb::cli {

namespace {

std::string CpuModel() {
  std::ifstream in("/proc/cpuinfo");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) {
        const auto start = line.find_first_not_of(' ', colon + 1);
        return start == std::string::npos ? "" : line.substr(start);
      }
    }
  }
  return "unknown";
}

std::string Compiler() {
#if defined(__clang__)
  return "clang " __clang_version__;
#elif defined(__GNUC__)
  return "gcc " __VERSION__;
#else
  return "unknown";
#endif
}

}  // namespace

HardwareInfo CollectHardware() {
  HardwareInfo hw;
  hw.cpu_model = CpuModel();
  hw.logical_cores = std::thread::hardware_concurrency();
  utsname u{};
  if (uname(&u) == 0) {
    hw.os = std::string(u.sysname) + " " + u.release + " " + u.machine;
  }
  hw.compiler = Compiler();
  hw.build_type = HELB_BUILD_TYPE;
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  hw.timestamp_utc = buf;
  return hw;
}

void WriteHardwareHeader(std::ostream& out, const HardwareInfo& hw) {
  out << "# cpu: " << hw.cpu_model << "\n"
      << "# logical_cores: " << hw.logical_cores << "\n"
      << "# os: " << hw.os << "\n"
      << "# compiler: " << hw.compiler << "\n"
      << "# build_type: " << hw.build_type << "\n"
      << "# timestamp_utc: " << hw.timestamp_utc << "\n"
      << "# note: " << kTimingNote << "\n";
}

}  // namespace helb::cli
