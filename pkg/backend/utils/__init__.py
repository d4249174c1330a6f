# Helpers are imported from their own modules, eg backend.utils.saving, nothing is re-exported here
