package test.suite;

public class DACCase {
    private int hits;

    public int count() {
        hits++;
        return hits;
    }
}
