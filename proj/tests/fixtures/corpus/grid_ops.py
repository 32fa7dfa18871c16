# Dense grid helpers: construction, transforms, scans, and path sums.


def make_grid(rows, cols, fill):
    grid = []
    for _ in range(rows):
        line = [fill] * cols
        grid.append(line)
    return grid


def make_counting_grid(rows, cols):
    grid = []
    counter = 0
    for _ in range(rows):
        line = []
        for _ in range(cols):
            line.append(counter)
            counter += 1
        grid.append(line)
    return grid


def grid_shape(grid):
    if not grid:
        return (0, 0)
    return (len(grid), len(grid[0]))


def transpose(grid):
    rows, cols = grid_shape(grid)
    out = make_grid(cols, rows, 0)
    for row in range(rows):
        for col in range(cols):
            out[col][row] = grid[row][col]
    return out


def rotate_cw(grid):
    rows, cols = grid_shape(grid)
    out = make_grid(cols, rows, 0)
    for row in range(rows):
        for col in range(cols):
            out[col][rows - 1 - row] = grid[row][col]
    return out


def flip_horizontal(grid):
    out = []
    for line in grid:
        out.append(list(reversed(line)))
    return out


def flip_vertical(grid):
    out = []
    for line in reversed(grid):
        out.append(list(line))
    return out


def grid_total(grid):
    total = 0
    for line in grid:
        for cell in line:
            total += cell
    return total


def row_totals(grid):
    totals = []
    for line in grid:
        acc = 0
        for cell in line:
            acc += cell
        totals.append(acc)
    return totals


def col_totals(grid):
    rows, cols = grid_shape(grid)
    totals = [0] * cols
    for row in range(rows):
        for col in range(cols):
            totals[col] += grid[row][col]
    return totals


def grid_peak(grid):
    best = None
    for line in grid:
        for cell in line:
            if best is None or cell > best:
                best = cell
    return best


def spiral_order(grid):
    rows, cols = grid_shape(grid)
    if rows == 0:
        return []
    top, bottom = 0, rows - 1
    left, right = 0, cols - 1
    order = []
    while top <= bottom and left <= right:
        for col in range(left, right + 1):
            order.append(grid[top][col])
        top += 1
        for row in range(top, bottom + 1):
            order.append(grid[row][right])
        right -= 1
        if top <= bottom:
            for col in range(right, left - 1, -1):
                order.append(grid[bottom][col])
            bottom -= 1
        if left <= right:
            for row in range(bottom, top - 1, -1):
                order.append(grid[row][left])
            left += 1
    return order


def diagonal_main(grid):
    rows, cols = grid_shape(grid)
    steps = min(rows, cols)
    out = []
    for pos in range(steps):
        out.append(grid[pos][pos])
    return out


def border_cells(grid):
    rows, cols = grid_shape(grid)
    if rows == 0:
        return []
    out = []
    for col in range(cols):
        out.append(grid[0][col])
    for row in range(1, rows):
        out.append(grid[row][cols - 1])
    if rows > 1:
        for col in range(cols - 2, -1, -1):
            out.append(grid[rows - 1][col])
    if cols > 1:
        for row in range(rows - 2, 0, -1):
            out.append(grid[row][0])
    return out


def neighbors4(grid, row, col):
    rows, cols = grid_shape(grid)
    out = []
    for d_row, d_col in ((-1, 0), (1, 0), (0, -1), (0, 1)):
        n_row = row + d_row
        n_col = col + d_col
        if 0 <= n_row < rows and 0 <= n_col < cols:
            out.append(grid[n_row][n_col])
    return out


def smooth_once(grid):
    rows, cols = grid_shape(grid)
    out = make_grid(rows, cols, 0)
    for row in range(rows):
        for col in range(cols):
            around = neighbors4(grid, row, col)
            total = grid[row][col]
            for cell in around:
                total += cell
            out[row][col] = total // (len(around) + 1)
    return out


def min_path_sum(grid):
    rows, cols = grid_shape(grid)
    if rows == 0:
        return 0
    cost = make_grid(rows, cols, 0)
    cost[0][0] = grid[0][0]
    for col in range(1, cols):
        cost[0][col] = cost[0][col - 1] + grid[0][col]
    for row in range(1, rows):
        cost[row][0] = cost[row - 1][0] + grid[row][0]
    for row in range(1, rows):
        for col in range(1, cols):
            best = min(cost[row - 1][col], cost[row][col - 1])
            cost[row][col] = best + grid[row][col]
    return cost[rows - 1][cols - 1]


def count_islands(grid):
    rows, cols = grid_shape(grid)
    seen = make_grid(rows, cols, False)
    count = 0
    for row in range(rows):
        for col in range(cols):
            if grid[row][col] == 0 or seen[row][col]:
                continue
            count += 1
            stack = [(row, col)]
            while stack:
                cur_row, cur_col = stack.pop()
                if cur_row < 0 or cur_row >= rows:
                    continue
                if cur_col < 0 or cur_col >= cols:
                    continue
                if seen[cur_row][cur_col] or grid[cur_row][cur_col] == 0:
                    continue
                seen[cur_row][cur_col] = True
                stack.append((cur_row - 1, cur_col))
                stack.append((cur_row + 1, cur_col))
                stack.append((cur_row, cur_col - 1))
                stack.append((cur_row, cur_col + 1))
    return count


def scale_grid(grid, factor):
    out = []
    for line in grid:
        scaled = []
        for cell in line:
            scaled.append(cell * factor)
        out.append(scaled)
    return out


def add_grids(left, right):
    rows, cols = grid_shape(left)
    out = make_grid(rows, cols, 0)
    for row in range(rows):
        for col in range(cols):
            out[row][col] = left[row][col] + right[row][col]
    return out


def matmul(left, right):
    rows_l, inner = grid_shape(left)
    inner_r, cols_r = grid_shape(right)
    assert inner == inner_r
    out = make_grid(rows_l, cols_r, 0)
    for row in range(rows_l):
        for col in range(cols_r):
            acc = 0
            for k in range(inner):
                acc += left[row][k] * right[k][col]
            out[row][col] = acc
    return out


def identity_grid(size):
    out = make_grid(size, size, 0)
    for pos in range(size):
        out[pos][pos] = 1
    return out


SMALL = make_counting_grid(3, 4)
SQUARE = make_counting_grid(3, 3)

assert grid_shape(SMALL) == (3, 4)
assert grid_shape([]) == (0, 0)
assert transpose(transpose(SMALL)) == SMALL
assert grid_shape(transpose(SMALL)) == (4, 3)

spun = SQUARE
for _ in range(4):
    spun = rotate_cw(spun)
assert spun == SQUARE
assert rotate_cw(SQUARE)[0] == [6, 3, 0]

assert flip_horizontal(flip_horizontal(SMALL)) == SMALL
assert flip_vertical(flip_vertical(SMALL)) == SMALL

assert grid_total(SMALL) == sum(range(12))
assert row_totals(SMALL) == [6, 22, 38]
assert col_totals(SMALL) == [12, 15, 18, 21]
assert grid_peak(SMALL) == 11

assert spiral_order(SQUARE) == [0, 1, 2, 5, 8, 7, 6, 3, 4]
assert len(spiral_order(SMALL)) == 12
assert sorted(spiral_order(SMALL)) == list(range(12))

assert diagonal_main(SQUARE) == [0, 4, 8]
assert sorted(border_cells(SQUARE)) == [0, 1, 2, 3, 5, 6, 7, 8]
assert border_cells([[7]]) == [7]

assert sorted(neighbors4(SQUARE, 1, 1)) == [1, 3, 5, 7]
assert sorted(neighbors4(SQUARE, 0, 0)) == [1, 3]

flat = make_grid(3, 3, 5)
assert smooth_once(flat) == flat

assert min_path_sum([[1, 3, 1], [1, 5, 1], [4, 2, 1]]) == 7
assert min_path_sum([[3]]) == 3
assert min_path_sum([]) == 0

lake = [
    [1, 1, 0, 0],
    [1, 0, 0, 1],
    [0, 0, 1, 1],
    [0, 1, 0, 0],
]
assert count_islands(lake) == 3
assert count_islands(make_grid(2, 2, 0)) == 0
assert count_islands(make_grid(2, 2, 1)) == 1

assert scale_grid(SQUARE, 2)[2] == [12, 14, 16]
assert add_grids(SQUARE, scale_grid(SQUARE, -1)) == make_grid(3, 3, 0)

assert matmul(SQUARE, identity_grid(3)) == SQUARE
assert matmul(identity_grid(3), SQUARE) == SQUARE
assert matmul([[1, 2], [3, 4]], [[5, 6], [7, 8]]) == [[19, 22], [43, 50]]

print("grid_ops", grid_total(SMALL), min_path_sum(lake), count_islands(lake))
