// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef NCHC_PARALLEL_HPP
#define NCHC_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace nchc
{

// Calls fn(i) for i in [0, count) on up to `workers` threads. Work items are
// handed out through a shared counter; callers write results by index, so the
// outcome is independent of scheduling. The first exception is rethrown.
template <typename Fn>
void parallel_for(long count, int workers, Fn &&fn)
{
    if (count <= 0)
        return;
    const int threads = int(std::clamp<long>(workers, 1, count));
    if (threads == 1)
    {
        for (long i = 0; i < count; ++i)
            fn(i);
        return;
    }

    std::atomic<long> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;)
        {
            const long i = next.fetch_add(1);
            if (i >= count || failed.load())
                return;
            try
            {
                fn(i);
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                failed = true;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(std::size_t(threads));
    for (int t = 0; t < threads; ++t)
        pool.emplace_back(worker);
    for (auto &th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace nchc

#endif
