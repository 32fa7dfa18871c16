# Streaming and batch descriptive statistics over integer samples.


def mean_scaled(items):
    # returns (total, count) to avoid float division surprises
    total = 0
    for item in items:
        total += item
    return total, len(items)


def median_doubled(items):
    ordered = sorted(items)
    count = len(ordered)
    if count % 2:
        return 2 * ordered[count // 2]
    return ordered[count // 2 - 1] + ordered[count // 2]


def mode_of(items):
    counts = {}
    for item in items:
        counts[item] = counts.get(item, 0) + 1
    best = None
    for value in sorted(counts):
        if best is None or counts[value] > counts[best]:
            best = value
    return best


def value_range(items):
    low = items[0]
    high = items[0]
    for item in items[1:]:
        if item < low:
            low = item
        if item > high:
            high = item
    return high - low


def variance_scaled(items):
    # population variance times n*n, all integral
    total, count = mean_scaled(items)
    acc = 0
    for item in items:
        gap = item * count - total
        acc += gap * gap
    return acc, count


def covariance_sign(xs, ys):
    total_x, count = mean_scaled(xs)
    total_y, _ = mean_scaled(ys)
    acc = 0
    for pos in range(count):
        acc += (xs[pos] * count - total_x) * (ys[pos] * count - total_y)
    if acc > 0:
        return 1
    if acc < 0:
        return -1
    return 0


def percentile_nearest(items, pct):
    ordered = sorted(items)
    if not ordered:
        return None
    spot = (pct * (len(ordered) - 1) + 50) // 100
    return ordered[spot]


def zscore_ranks(items):
    # rank items by |x - mean| without floats: compare n*x to total
    total, count = mean_scaled(items)
    keyed = []
    for pos, item in enumerate(items):
        gap = abs(item * count - total)
        keyed.append((gap, pos))
    keyed.sort()
    return [pos for _, pos in keyed]


def histogram_bins(items, width):
    bins = {}
    for item in items:
        slot = item // width
        bins[slot] = bins.get(slot, 0) + 1
    return dict(sorted(bins.items()))


def cumulative(items):
    acc = 0
    out = []
    for item in items:
        acc += item
        out.append(acc)
    return out


def diffs(items):
    out = []
    for pos in range(1, len(items)):
        out.append(items[pos] - items[pos - 1])
    return out


def longest_streak(items, pred):
    best = 0
    run = 0
    for item in items:
        if pred(item):
            run += 1
            best = max(best, run)
        else:
            run = 0
    return best


SAMPLE = [2, 4, 4, 4, 5, 5, 7, 9]

total, count = mean_scaled(SAMPLE)
assert (total, count) == (40, 8)
assert median_doubled(SAMPLE) == 9
assert median_doubled([1, 3, 5]) == 6
assert mode_of(SAMPLE) == 4
assert mode_of([3, 1, 3, 1]) == 1
assert value_range(SAMPLE) == 7

var_scaled, n = variance_scaled(SAMPLE)
assert var_scaled == 4 * n * n * n  # classic sample: variance 4
assert variance_scaled([5, 5, 5]) == (0, 3)

assert covariance_sign([1, 2, 3], [2, 4, 6]) == 1
assert covariance_sign([1, 2, 3], [6, 4, 2]) == -1
assert covariance_sign([1, 2, 3], [5, 5, 5]) == 0

assert percentile_nearest(SAMPLE, 0) == 2
assert percentile_nearest(SAMPLE, 100) == 9
assert percentile_nearest(SAMPLE, 50) == 5
assert percentile_nearest([], 50) is None

ranks = zscore_ranks(SAMPLE)
assert ranks[0] in (1, 2, 3, 4, 5)
assert ranks[-1] in (0, 7)

bins = histogram_bins(SAMPLE, 3)
assert bins == {0: 1, 1: 5, 2: 1, 3: 1}
assert histogram_bins([], 4) == {}

assert cumulative([1, 2, 3]) == [1, 3, 6]
assert cumulative([]) == []
assert diffs(cumulative(SAMPLE)) == SAMPLE[1:]
assert diffs([7]) == []

assert longest_streak([1, 2, 2, 3, 2, 2, 2], lambda x: x == 2) == 3
assert longest_streak([], lambda x: True) == 0

print("stats_kit", total // count, mode_of(SAMPLE), bins[1])
