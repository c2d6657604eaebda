// Acceptance suite: one pass/fail line per criterion. Placeholder, filled in
// alongside the experiment harness.
#include <cstdio>

int main() {
    std::puts("acceptance suite not yet wired");
    return 1;
}
