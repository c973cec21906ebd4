package test.noh;

public class ClassB extends ClassA {
    public void touch() {
    }
}
