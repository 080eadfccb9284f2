import numpy as np

FIELDS = ("yaw_deg", "rotor_speed", "ct", "ti")


class WakeHistoryBuffer:
    """Fixed-capacity ring buffer of past rotor states for all turbines.

    Each entry stores a timestamp and one value per turbine for every name
    in ``FIELDS``. :meth:`lookup` returns the newest entry not later than the
    requested time; requests older than the retained window get the oldest
    entry.
    """

    def __init__(self, n_turbines, capacity):
        self.capacity = int(max(capacity, 1))
        self.times = np.zeros(self.capacity)
        self.values = np.zeros((self.capacity, len(FIELDS), n_turbines))
        self.count = 0
        self.head = 0  # slot of the next write

    def push(self, t, **state):
        if self.count and t <= self.newest_time:
            raise ValueError("history timestamps must be strictly increasing")
        self.times[self.head] = t
        self.values[self.head] = [state[name] for name in FIELDS]
        self.head = (self.head + 1) % self.capacity
        self.count = min(self.count + 1, self.capacity)

    @property
    def newest_time(self):
        return self.times[(self.head - 1) % self.capacity]

    def _ordered_slots(self):
        start = (self.head - self.count) % self.capacity
        return (start + np.arange(self.count)) % self.capacity

    def lookup(self, turbines, t_query):
        """State of ``turbines`` at times ``t_query`` (broadcast together).

        Returns a dict of arrays keyed by field name.
        """
        if self.count == 0:
            raise LookupError("empty wake history")
        slots = self._ordered_slots()
        idx = np.searchsorted(self.times[slots], t_query, side="right") - 1
        chosen = slots[np.clip(idx, 0, self.count - 1)]
        rows = self.values[chosen, :, turbines]
        return {name: rows[..., k] for k, name in enumerate(FIELDS)}
