#include "turan/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace turan
{
unsigned resolve_threads(unsigned requested)
{
    unsigned threads = requested ? requested : std::thread::hardware_concurrency();
    threads = std::max(threads, 1u);
    if (char const* env = std::getenv("TURAN_THREADS"))
    {
        try
        {
            long cap = std::stol(env);
            if (cap >= 1)
                threads = std::min<unsigned>(threads, static_cast<unsigned>(cap));
        }
        catch (std::exception const&)
        {
            // unparsable cap is ignored
        }
    }
    return threads;
}

void parallel_for(std::size_t count, unsigned threads,
                  std::function<void(std::size_t)> const& body)
{
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1)
    {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
    {
        workers.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++)
            {
                try
                {
                    body(i);
                }
                catch (...)
                {
                    std::lock_guard lock{failure_mutex};
                    if (!failure)
                        failure = std::current_exception();
                }
            }
        });
    }
    for (auto& w : workers)
        w.join();
    if (failure)
        std::rethrow_exception(failure);
}

}  // namespace turan
