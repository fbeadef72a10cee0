#pragma once

#include <malloc.h>

namespace kea {

// Training frees and reallocates multi-hundred-KB matrices every update; by default glibc
// hands those back to the kernel each time, which costs more than the arithmetic.
inline void tune_allocator() {
    mallopt(M_MMAP_THRESHOLD, 32 * 1024 * 1024);
    mallopt(M_TRIM_THRESHOLD, 256 * 1024 * 1024);
}

}  // namespace kea
